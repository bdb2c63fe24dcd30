import io
import json
import subprocess
import sys

import pytest

from toricgauss.cli import decode_document, encode_document, main, run

from conftest import corpus_fixtures

SINGULAR = {"schema": 1, "points": [[0, 0], [1, 0], [0, 1], [1, 1], [2, 0], [1, 2]], "order": 2}


def invoke(args, doc=None, monkeypatch=None, capsys=None):
    if doc is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(doc)))
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cli(monkeypatch, capsys):
    def call(args, doc=None):
        code, out, err = invoke(args, doc, monkeypatch, capsys)
        return code, (decode_document(out) if code == 0 and out else None), err
    return call


def test_gauss_singular_surface(cli):
    code, doc, _ = cli(["gauss", "--threads", "1"], SINGULAR)
    assert code == 0
    r = doc["result"]
    assert r["fiber_dimension"] == 2 and r["b_k"] == [[5, 4]]
    assert r["projection"] == [[1, 0], [0, 1]]
    assert doc["reduction"] is None and doc["mode"] == "full"


def test_order_flag_overrides(cli):
    code, doc, _ = cli(["gauss", "--k", "1", "--threads", "1"], SINGULAR)
    assert code == 0 and doc["order"] == 1 and doc["result"]["q"] == 3


def test_family(cli):
    code, doc, _ = cli(["family", "pnN", "--n", "3", "--N", "2", "--k", "2", "--threads", "1"])
    assert code == 0
    assert doc["lattice_point_count"] == 10
    assert doc["result"]["fiber_dimension"] == 3


def test_classify_veronese(cli):
    doc = {"schema": 1, "polytope_vertices": [[0, 0], [3, 0], [0, 3]], "order": 3}
    code, out, _ = cli(["classify", "--threads", "1"], doc)
    assert code == 0
    r = out["result"]
    assert r["veronese"] and not r["finite"] and r["theorem_consistent"]
    assert out["num_points"] == 10


def test_jets_and_spanned(cli):
    code, doc, _ = cli(["jets"], SINGULAR)
    assert code == 0
    assert doc["result"]["rank"] == 6 and len(doc["result"]["matrix"]) == 6
    assert doc["result"]["rows"][0] == [0, 0]
    code, doc, _ = cli(["spanned", "-k", "2"],
                       {"schema": 1, "points": [[-1, 0], [-1, 1], [0, -1], [0, 0], [0, 1], [1, -1], [1, 0]]})
    r = doc["result"]
    assert r["osculating_dimension"] == 6 and r["generically_kjet_spanned"]
    assert r["hull_smooth"] and r["kjet_spanned"] is False


def test_oracle_command(cli):
    code, doc, _ = cli(["oracle", "--threads", "1"], SINGULAR)
    assert code == 0 and doc["result"]["status"] == "pass"
    assert "timings_seconds" not in doc["result"]
    code, doc, _ = cli(["oracle", "--threads", "1", "--timings"], SINGULAR)
    assert set(doc["result"]["timings_seconds"]) == {"oracle", "full", "exchange"}


@pytest.mark.parametrize("doc,fragment", [
    ({"schema": 1, "order": 1}, "exactly one"),
    ({"schema": 1, "points": [[0, 0]], "polytope_vertices": [[0, 0]], "order": 1}, "exactly one"),
    ({"schema": 2, "points": [[0]], "order": 1}, "'schema'"),
    ({"schema": 1, "points": [[0, 0], [1]], "order": 1}, "'points'"),
    ({"schema": 1, "points": [[0, 0], [0, 0]], "order": 1}, "duplicate"),
    ({"schema": 1, "points": [[0.5]], "order": 1}, "'points/0/0'"),
    ({"schema": 1, "points": [[0]], "order": -1}, "'order'"),
    ({"schema": 1, "points": [[0]]}, "'order'"),
    ({"schema": 1, "points": [[0]], "order": 1, "options": {"mode": "fast"}}, "'options/mode'"),
    ({"schema": 1, "points": [[0]], "order": 1, "extra": 1}, "document"),
])
def test_schema_errors(cli, doc, fragment):
    code, _, err = cli(["gauss"], doc)
    assert code == 1
    assert fragment in err


def test_bad_json_and_flags(cli, monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO("{not json"))
    assert main(["gauss"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["gauss", "--mode", "quick"])
    assert exc.value.code == 1


def test_precondition_and_budget(cli):
    square = {"schema": 1, "points": [[0, 0], [1, 0], [0, 1], [1, 1]], "order": 2}
    code, _, err = cli(["gauss"], square)
    assert code == 2 and "not generically" in err
    code, _, _ = cli(["gauss", "--strict-dim"], {"schema": 1, "points": [[0, 0], [1, 1], [2, 2]], "order": 1})
    assert code == 2
    code, _, _ = cli(["spanned"], {"schema": 1, "points": [[0, 0], [1, 0], [0, 1], [1, 1], [2, 0], [1, 2]],
                                   "order": 2})
    assert code == 0
    big = {"schema": 1, "polytope_vertices": [[0, 0], [3, 0], [0, 3], [3, 3]], "order": 3}
    code, _, _ = cli(["gauss", "--budget", "20", "--threads", "1"], big)
    assert code == 3
    code, _, _ = cli(["oracle", "--budget", "20", "--threads", "1"], big)
    assert code == 3


def test_mismatch_exit_code(cli, monkeypatch):
    import toricgauss.oracle as oracle

    monkeypatch.setattr(oracle, "compute_Bk", lambda A, k, threads=1: [(9, 9)])
    code, _, err = cli(["oracle", "--threads", "1"], SINGULAR)
    assert code == 4 and "mismatch" in err


def test_reduction(cli):
    # a segment of length 2 inside a plane in Z^3
    doc = {"schema": 1, "points": [[1, 1, 1], [2, 3, 1], [3, 5, 1]], "order": 2}
    code, out, _ = cli(["gauss", "--threads", "1"], doc)
    assert code == 0
    assert out["reduction"]["dimension"] == 1 and out["reduction"]["ambient_rank"] == 3
    assert out["ambient_rank"] == 3 and out["result"]["fiber_dimension"] == 1


def test_big_integers_round_trip(cli):
    big = 2**60
    doc = {"schema": 1, "points": [[0], [big], [3 * big]], "order": 1}
    code, out, _ = cli(["gauss", "--threads", "1"], doc)
    assert code == 0
    assert [big] in out["result"]["b_k"]
    text = encode_document(run("gauss", doc))
    raw = json.loads(text)
    assert all(isinstance(v, str) for v in raw["result"]["b_k"][1:] for v in v)
    assert "/result/b_k/1/0" in raw["big_integers"]
    again = {"a": [2**70, -(2**53), 2**53 - 1], "b": {"c": [[2**64]]}}
    assert decode_document(encode_document(again)) == again


def test_deterministic_across_threads(tmp_path):
    path = tmp_path / "hex.json"
    path.write_text(json.dumps({"schema": 1, "polytope_vertices": [[-2, 0], [-2, 2], [0, -2], [0, 2],
                                                                   [2, -2], [2, 0]], "order": 2}))
    outs = []
    for threads in ("1", "2", "1"):
        res = subprocess.run([sys.executable, "-m", "toricgauss", "gauss", str(path), "--threads", threads],
                             capture_output=True, check=True)
        outs.append(res.stdout)
    assert outs[0] == outs[1] == outs[2]


def test_output_file(cli, tmp_path):
    target = tmp_path / "out.json"
    code, _, _ = cli(["gauss", "-o", str(target), "--threads", "1"], SINGULAR)
    assert code == 0
    assert decode_document(target.read_text())["result"]["fiber_dimension"] == 2


@pytest.mark.parametrize("name,doc,expected", corpus_fixtures(), ids=[f[0] for f in corpus_fixtures()])
def test_corpus_expected(name, doc, expected):
    assert encode_document(run("gauss", doc)) == expected
