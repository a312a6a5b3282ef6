import json
import subprocess
import sys

import pytest

from roundgroups.cli import main
from roundgroups.specfile import dump_spec
from roundgroups.trapdoor import build_trapdoor_cipher


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "analyze", "--preset", "aes")
    assert code == 0 and "CERTIFIED_PRIMITIVE" in out and "r = 1" in out
    code, out, _ = run(capsys, "analyze", "--preset", "toy:1x3:inversion:identity")
    assert code == 2 and "INCONCLUSIVE" in out
    code, _, err = run(capsys, "analyze", str(tmp_path / "missing.json"))
    assert code == 1 and "not found" in err


def test_analyze_malformed(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n_t": 2, "m": 4, "sboxes": "identity"}')
    code, _, err = run(capsys, "analyze", str(bad))
    assert code == 1 and "field 'lambda'" in err
    bad.write_text("{oops")
    code, _, err = run(capsys, "analyze", str(bad))
    assert code == 1 and "line 1" in err


def test_find_blocks(capsys, tmp_path):
    code, out, _ = run(capsys, "find-blocks", "--preset", "toy:2x4:inversion:mixcolumns")
    assert code == 0 and "methods agree: yes" in out
    code, _, _ = run(capsys, "find-blocks", "--preset", "toy:2x2:identity:identity")
    assert code == 3
    td = build_trapdoor_cipher(8, 4, seed=1)
    path = tmp_path / "td.json"
    dump_spec(td.cipher, path, td.planted_U)
    code, out, _ = run(capsys, "--format", "json", "find-blocks", str(path))
    doc = json.loads(out)
    assert code == 3
    assert doc["planted_U"]["recovered"] and doc["methods_agree"]


def test_find_blocks_size_guard(capsys):
    code, _, err = run(capsys, "find-blocks", "--preset", "aes")
    assert code == 1 and "--sampled" in err


def test_trapdoor(capsys):
    code, out, _ = run(capsys, "trapdoor", "--bits", "4", "--dim", "2")
    assert code == 0 and "trapdoor 1.0000" in out and "recovered True" in out
    code, _, _ = run(capsys, "trapdoor", "--bits", "4", "--dim", "4")
    assert code == 1
    code, out, _ = run(capsys, "--format", "json", "trapdoor", "--bits", "16", "--dim", "8",
                       "--seed", "1", "--pairs", "1000")
    doc = json.loads(out)
    assert code == 0
    assert all(a["trial_count"] <= 512 for a in doc["attacks"])


@pytest.mark.parametrize("m,count", [(3, 2), (4, 3)])
def test_field_appendix(capsys, m, count):
    code, out, _ = run(capsys, "--format", "json", "field", "appendix", "--m", str(m))
    doc = json.loads(out)
    assert code == 0 and len(doc["entries"]) == count and doc["hua"]["failures"] == []


def test_field_appendix_range(capsys):
    code, _, _ = run(capsys, "field", "appendix", "--m", "9")
    assert code == 1


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 1
    code, _, _ = run(capsys, "analyze")
    assert code == 1


def test_json_is_deterministic():
    cmd = [sys.executable, "-m", "roundgroups", "--format", "json", "--seed", "5",
           "trapdoor", "--bits", "8", "--dim", "3", "--pairs", "500", "--trials", "3"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["cipher"] == "trapdoor:8:3@5"


def test_subcommand_flags_match_global(capsys):
    a = run(capsys, "--format", "json", "--seed", "3", "find-blocks", "--preset",
            "toy:2x3:random:random")
    b = run(capsys, "find-blocks", "--preset", "toy:2x3:random:random", "--format", "json",
            "--seed", "3")
    assert a == b
