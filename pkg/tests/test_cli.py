import json
import subprocess
import sys
from pathlib import Path

import pytest

from hqft.cli import main

sys.path.insert(0, str(Path(__file__).parent))
from golden_runner import GOLDEN, manifest, run  # noqa: E402

ENTRIES = manifest()


@pytest.mark.parametrize("entry", ENTRIES, ids=[e["id"] for e in ENTRIES])
def test_golden(entry):
    code, text = run(entry["args"])
    assert code == entry["exit"]
    assert text == (GOLDEN / f"{entry['id']}.txt").read_text()


@pytest.mark.parametrize("entry", [e for e in ENTRIES if "json-like" in " ".join(e["args"])],
                         ids=lambda e: e["id"])
def test_json_like_parses(entry):
    code, text = run(entry["args"])
    payload = json.loads(text)
    assert payload["exit_code"] == code


@pytest.mark.parametrize("args, message", [
    (["validate", "/nonexistent.yaml"], "cannot read"),
    (["operad", "@pair", "--profile", "a,q->t"], "unknown object 'q'"),
    (["operad", "@pair", "--profile", "a,b"], "--profile"),
    (["check-qft", "@orbifold_z2"], "no theory section"),
    (["horan", "@pair", "--window", "0", "1"], "no presheaf"),
    (["horan", "@orbifold_z2"], "window"),
    (["validate", "@pair", "--threads", "0"], "threads"),
])
def test_input_errors_exit_two(args, message, capsys):
    code, text = run(args) if "--threads" not in args else (main(args), "")
    err = capsys.readouterr().err
    assert code == 2
    assert text == ""
    assert err.startswith("error:") and message in err


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as e:
        main(["operad", "@pair"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["no-such-command", "@pair"])
    assert e.value.code == 2


def test_cohomological_negates_degrees():
    args = ["groupoid-cohomology", "@groupoids", "--window", "-3", "0", "--format=json-like"]
    plain = json.loads(run(args)[1])
    flipped = json.loads(run(args + ["--cohomological"])[1])
    for name, rows in plain["groupoids"].items():
        mirrored = {(-r["degree"], r["rank"], r["trusted"]) for r in rows}
        assert mirrored == {(r["degree"], r["rank"], r["trusted"]) for r in flipped["groupoids"][name]}


@pytest.mark.parametrize("args", [
    ["horan", "@orbifold_swap", "--window", "-3", "1", "--verify"],
    ["resolve-check", "@chain3", "--max-arity", "3", "--window", "0", "3"],
    ["groupoid-cohomology", "@groupoids", "--window", "-3", "0"],
])
def test_thread_count_does_not_change_output(args):
    assert run(args, threads=1) == run(args, threads=4)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hqft", "operad", "@pair", "--profile", "a,b->t"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "pair_operad_ab_t.txt").read_text()
