"""Smoke test for the divpredict extension module.

Build and install first:  maturin develop -m crates/py/Cargo.toml
"""
import json

import divpredict

tables = divpredict.bundled_tables()
assert tables.classes == ["I", "II", "III", "FAIL"]
assert tables.count("medium", "HINDI", "II") > 0

report = tables.audit()
assert not report["is_consistent"]
assert report["inconsistent_classes"] == ["III", "FAIL"]
assert report["inconsistent_grand"] == ["medium"]

model = divpredict.Model.fit(tables, policy="reference:stream", alpha="0")
assert [round(p, 6) for p in model.priors] == [0.316667, 0.413333, 0.151667, 0.118333]

label, p = model.predict({"medium": "HINDI", "caste": "OBC", "stream": "BA(NC)"})
assert label == "II" and abs(p - 0.568261) < 1e-5, (label, p)

post = model.posterior({"stream": "BSc(Math)"})
assert abs(sum(post["per_class"].values()) - 1.0) < 1e-12

again = divpredict.Model.from_json(model.to_json())
assert again.predict({"medium": "ENGLISH"}) == model.predict({"medium": "ENGLISH"})

csv = model.grid(format="csv")
assert len(csv.strip().splitlines()) == 31

diffs = model.diff(divpredict.bundled_grid(), tolerance=1e-5)
print("discrepancies:", [tuple(d["values"]) for d in diffs])

records = "medium,caste,stream,class\nHINDI,OBC,BA(NC),II\nENGLISH,GEN,BSc(Math),I\n"
metrics = json.loads(model.evaluate(records))
assert metrics["records"] == 2

try:
    model.predict({"medium": "TAMIL"})
except ValueError as e:
    assert "TAMIL" in str(e)
else:
    raise AssertionError("unknown value accepted")

print("smoke test ok")
