"""Convert the Rust oracle's output into shipped parameter files and vectors.

    cargo run --release --manifest-path tools/kat_oracle/Cargo.toml -- /tmp/oracle
    python scripts/import_oracle_params.py /tmp/oracle
"""
import argparse
import json
import shutil
from pathlib import Path

from zkfhash.params import DEFAULT_FILES, content_digest, from_dict, validate

ROOT = Path(__file__).resolve().parent.parent


def convert(raw: dict) -> dict:
    body = {k: raw[k] for k in ("kind", "field", "m", "d", "d_inv", "rounds", "mds", "round_constants")}
    if "griffin" in raw:
        body["griffin"] = raw["griffin"]
    if "rc" in raw:
        rc = raw["rc"]
        v, small = rc["sbox_domain"], rc["sbox"]
        assert len(small) == v
        sboxes = {str(s): small + list(range(v, s)) for s in sorted(set(rc["bar"]["radices"] if "bar" in rc else rc["radices"]))}
        body["rc"] = {
            "schedule": rc["schedule"],
            "alpha1": rc["alpha1"], "beta1": rc["beta1"],
            "alpha2": rc["alpha2"], "beta2": rc["beta2"],
            "bar": {"radices": rc["radices"], "sboxes": sboxes},
        }
    body["digest"] = content_digest(body)
    return body


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("oracle_dir", type=Path)
    args = ap.parse_args()
    for kind, name in DEFAULT_FILES.items():
        raw = json.loads((args.oracle_dir / f"params_{kind}.json").read_text())
        body = convert(raw)
        problems = validate(from_dict(body))
        if problems:
            raise SystemExit(f"{kind}: {problems}")
        (ROOT / "src/zkfhash/data" / name).write_text(json.dumps(body, indent=1) + "\n")
        shutil.copy(args.oracle_dir / f"kat_{kind}.json", ROOT / "tests/vectors" / f"kat_{kind}.json")
        print(f"{kind}: {name} {body['digest']}")


if __name__ == "__main__":
    main()
