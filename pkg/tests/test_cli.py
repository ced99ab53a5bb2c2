import io
import json
import subprocess
import sys

import jsonschema
import pytest

from greedytree.cli import EXIT_NO, EXIT_OK, EXIT_PARSE, EXIT_UNCERTAIN, EXIT_USAGE, JSON_SCHEMA, run
from greedytree.tree import HUB_EXAMPLES, hub_tree, qk_tree, serialize_tree, star


def call(*argv, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, t in {"k16": star(6), "k15": star(5), "q2": qk_tree(2),
                    "hubb": hub_tree(HUB_EXAMPLES["b"]), "hubc": hub_tree(HUB_EXAMPLES["c"])}.items():
        p = tmp_path / f"{name}.tree"
        p.write_text(serialize_tree(t))
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


def test_decide_k16(files):
    code, out, _ = call("decide", files["k16"])
    assert code == EXIT_NO
    assert "degree at least 6" in out


def test_decide_yes_and_uncertain(files):
    assert call("decide", files["k15"])[0] == EXIT_OK
    code, out, _ = call("decide", files["hubc"])
    assert code == EXIT_UNCERTAIN and "verdict: uncertain" in out


def test_decide_explain(files):
    code, out, _ = call("decide", files["hubb"], "--explain")
    assert code == EXIT_OK
    assert "trace:" in out and "wheel:" in out and "omega:" in out


def test_wheel_uncertain():
    code, out, _ = call("wheel", "--phis", "180,120,120,120,30")
    assert code == EXIT_UNCERTAIN
    assert "uncertain" in out


def test_wheel_yes_and_no():
    code, out, _ = call("wheel", "--phis", "180,120,105,93.75,60")
    assert code == EXIT_OK and "beta:" in out
    code, out, _ = call("wheel", "--phis", "180,105,105,105,60")
    assert code == EXIT_NO and "LP infeasible for all orderings" in out


def test_angle_q2(files):
    code, out, _ = call("angle", files["q2"], "--root", "b0")
    assert code == EXIT_OK
    assert out.strip() == "97.5⁻"


def test_angle_with_anchor_and_errors(files):
    code, out, _ = call("angle", files["q2"], "--root", "b1", "--anchor", "b2")
    assert code == EXIT_OK
    assert call("angle", files["q2"], "--root", "b1")[0] == EXIT_USAGE
    assert call("angle", files["q2"], "--root", "nope")[0] == EXIT_USAGE
    assert call("angle", files["q2"], "--root", "b1", "--anchor", "c3")[0] == EXIT_USAGE


def test_draw_and_verify_round_trip(files):
    d = files["dir"] / "k15.xy"
    svg = files["dir"] / "k15.svg"
    png = files["dir"] / "k15.png"
    code, out, _ = call("draw", files["k15"], "-o", str(d), "--svg", str(svg), "--png", str(png), "--bisectors")
    assert code == EXIT_OK and "wrote" in out
    assert svg.read_text().startswith("<svg") and png.stat().st_size > 0
    code, out, _ = call("verify", str(d), "--tree", files["k15"])
    assert code == EXIT_OK and "greedy: yes" in out


def test_draw_to_stdout_and_non_yes(files):
    code, out, _ = call("draw", files["q2"])
    assert code == EXIT_OK and len(out.strip().splitlines()) == len(qk_tree(2))
    code, out, _ = call("draw", files["k16"])
    assert code == EXIT_NO and "no drawing" in out


def test_verify_rejects_bad_drawing(files):
    d = files["dir"] / "bad.xy"
    d.write_text("r 0 0\n" + "".join(f"x{i} {i} 0\n" for i in range(1, 6)))
    code, out, _ = call("verify", str(d), "--tree", files["k15"])
    assert code == EXIT_NO and "greedy: no" in out


def test_enumerate_tsv():
    code, out, _ = call("enumerate", "6", "--max-degree", "3")
    lines = out.strip().splitlines()
    assert code == EXIT_OK
    assert lines[0] == "n\tmax_degree\tverdict\trule\tedges"
    assert len(lines) == 1 + 4  # four trees on six nodes with maximum degree 3
    assert all(len(line.split("\t")) == 5 for line in lines)


def test_enumerate_random_png(tmp_path):
    png = tmp_path / "counts.png"
    code, out, _ = call("enumerate", "9", "--random", "5", "--seed", "3", "--png", str(png))
    assert code == EXIT_OK and len(out.strip().splitlines()) == 6 and png.exists()


@pytest.mark.parametrize(
    "argv, code",
    [
        (["bogus"], EXIT_USAGE),
        ([], EXIT_USAGE),
        (["wheel"], EXIT_USAGE),
        (["wheel", "--phis", "180,abc"], EXIT_PARSE),
        (["wheel", "--phis", "75,180,180"], EXIT_PARSE),
        (["decide", "/nonexistent/file.tree"], EXIT_PARSE),
        (["enumerate", "0"], EXIT_USAGE),
        (["enumerate", "40"], EXIT_USAGE),
    ],
)
def test_error_exit_codes(argv, code):
    assert call(*argv)[0] == code


def test_malformed_tree_file(files):
    bad = files["dir"] / "cycle.tree"
    bad.write_text("a b\nb c\nc a\n")
    code, _, err = call("decide", str(bad))
    assert code == EXIT_PARSE and "cycle" in err


def test_draw_option_conflicts(files):
    assert call("draw", files["k15"], "--json", "-o", "-")[0] == EXIT_USAGE
    assert call("draw", files["k15"], "--shrink", "0.5")[0] == EXIT_USAGE


@pytest.mark.parametrize(
    "argv",
    [
        ["decide", "{k16}", "--json"],
        ["decide", "{hubb}", "--json", "--explain"],
        ["angle", "{q2}", "--root", "b0", "--json", "--explain"],
        ["wheel", "--phis", "180,120,105,93.75,60", "--json"],
        ["wheel", "--phis", "180,120,120,120,30", "--json"],
        ["draw", "{k15}", "--json"],
        ["enumerate", "5", "--json"],
        ["decide", "/nonexistent", "--json"],
        ["wheel", "--phis", "x", "--json"],
    ],
)
def test_json_output_validates(files, argv):
    argv = [a.format(**files) for a in argv]
    code, out, _ = call(*argv)
    doc = json.loads(out)
    jsonschema.validate(doc, JSON_SCHEMA)
    assert doc["exit_code"] == code


def test_output_is_deterministic(files):
    for argv in (["decide", files["hubb"], "--explain"], ["wheel", "--phis", "180,120,105,93.75,60", "--json"],
                 ["draw", files["q2"]], ["enumerate", "7"]):
        assert call(*argv) == call(*argv)


def test_console_script_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "greedytree.cli", "decide", files["k16"]],
                         capture_output=True, text=True)
    assert res.returncode == EXIT_NO and "degree at least 6" in res.stdout
