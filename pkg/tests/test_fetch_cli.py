import io
import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

import pytest

from gtype import cli, fetch
from gtype.fetch import (
    CurveRecord, LabelSyntaxError, MalformedResponseError, NetworkError, OfflineError,
    RateLimiter, UnknownLabelError, fetch_curve, fetch_many, parse_response,
)

REMOTE = {
    "9001a1": {"data": [{"ainvs": [0, 0, 1, -1, 0]}]},
    "9002a1": {"ainvs": ["1", "0", "0", "-1/1", "3"]},
    "9003a1": {"data": []},
    "9004a1": {"data": [{"ainvs": [0, 0, 0, 0, 0]}]},
}


class Handler(BaseHTTPRequestHandler):
    hits = []

    def do_GET(self):
        q = parse_qs(urlparse(self.path).query)
        label = q.get("Clabel", [""])[0]
        Handler.hits.append(label)
        if label == "9005a1":
            body, code = b"<html>not json", 200
        elif label == "9006a1":
            body, code = b"boom", 500
        elif label in REMOTE:
            body, code = json.dumps(REMOTE[label]).encode(), 200
        else:
            body, code = b"{}", 404
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


@pytest.fixture(scope="module")
def server():
    httpd = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    th = threading.Thread(target=httpd.serve_forever, daemon=True)
    th.start()
    yield f"http://127.0.0.1:{httpd.server_address[1]}/api/"
    httpd.shutdown()


@pytest.fixture
def env(tmp_path, monkeypatch, server):
    monkeypatch.setenv("GTYPE_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.setenv("GTYPE_DB_URL", server)
    monkeypatch.delenv("GTYPE_OFFLINE", raising=False)
    monkeypatch.setattr(fetch, "_LIMITER", RateLimiter(0))
    Handler.hits.clear()
    return tmp_path


def run(argv, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    old = cli.sys.stdout, cli.sys.stderr, cli.sys.stdin
    cli.sys.stdout, cli.sys.stderr = out, err
    if stdin is not None:
        cli.sys.stdin = io.StringIO(stdin)
    try:
        code = cli.main(argv)
    finally:
        cli.sys.stdout, cli.sys.stderr, cli.sys.stdin = old
    return code, out.getvalue(), err.getvalue()


# -------------------------------------------------------------------- fetch

def test_bundled_lookup_needs_no_network(env, monkeypatch):
    monkeypatch.setenv("GTYPE_OFFLINE", "1")
    rec = fetch_curve("49a1")
    assert rec.source == "local"
    assert rec.curve().j == -3375


def test_remote_then_cache(env, monkeypatch):
    rec = fetch_curve("9001a1")
    assert rec.source == "remote" and rec.coefficients == (0, 0, 1, -1, 0)
    assert Handler.hits == ["9001a1"]
    monkeypatch.setenv("GTYPE_OFFLINE", "1")
    again = fetch_curve("9001a1")
    assert again == rec
    assert Handler.hits == ["9001a1"]
    assert json.loads((env / "cache" / "9001a1.json").read_text())["coefficients"] == ["0", "0", "1", "-1", "0"]


def test_flat_payload_with_string_coefficients(env):
    assert fetch_curve("9002a1").coefficients == (1, 0, 0, -1, 3)


@pytest.mark.parametrize("label,exc", [
    ("9003a1", UnknownLabelError),
    ("9999a1", UnknownLabelError),
    ("9004a1", MalformedResponseError),
    ("9005a1", MalformedResponseError),
    ("9006a1", NetworkError),
])
def test_remote_failures(env, label, exc):
    with pytest.raises(exc):
        fetch_curve(label)
    assert not (env / "cache" / f"{label}.json").exists()


def test_offline_cold_cache(env, monkeypatch):
    monkeypatch.setenv("GTYPE_OFFLINE", "1")
    with pytest.raises(OfflineError):
        fetch_curve("9001a1")
    assert Handler.hits == []


@pytest.mark.parametrize("label", ["badlabel!", "11", "a11a1", "11A1", ""])
def test_label_syntax(label):
    with pytest.raises(LabelSyntaxError):
        fetch_curve(label)


def test_unreachable_host(env, monkeypatch):
    monkeypatch.setenv("GTYPE_DB_URL", "http://127.0.0.1:9/")
    with pytest.raises(NetworkError):
        fetch_curve("9001a1")


def test_corrupt_cache_is_refetched(env):
    d = env / "cache"
    d.mkdir()
    (d / "9001a1.json").write_text("{not json")
    assert fetch_curve("9001a1").source == "remote"


def test_fetch_many_keeps_errors_per_item(env):
    out = fetch_many(["9001a1", "9003a1", "11a1", "bad!"], workers=3)
    assert isinstance(out[0], CurveRecord)
    assert isinstance(out[1], UnknownLabelError)
    assert out[2].source == "local"
    assert isinstance(out[3], LabelSyntaxError)


def test_record_round_trip_and_validation():
    rec = CurveRecord("11a1", (0, -1, 1, -10, -20), "local")
    assert CurveRecord.from_json(json.loads(json.dumps(rec.to_json()))) == rec
    with pytest.raises(ValueError):
        CurveRecord(None, (0, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        CurveRecord(None, (0, 0, 0, 1))
    with pytest.raises(ValueError):
        CurveRecord(None, (0, 0, 0, 1, 0), "elsewhere")


def test_parse_response_rejects_short_lists():
    with pytest.raises(MalformedResponseError):
        parse_response("1a1", b'{"ainvs": [1, 2]}')
    with pytest.raises(MalformedResponseError):
        parse_response("1a1", b'{"data": {}}')


def test_rate_limiter_spacing():
    import time
    lim = RateLimiter(0.05)
    t0 = time.monotonic()
    for _ in range(4):
        lim.wait()
    assert time.monotonic() - t0 >= 0.14


# ---------------------------------------------------------------------- cli

@pytest.mark.parametrize("argv,verdict", [
    (["group-check", "--perm", "(1 2 3),(1 2)(3 4)", "--test", "genA4"], True),
    (["group-check", "--perm", "(1 2 3),(1 2)", "--test", "genA4"], False),
    (["group-check", "--dpq", "3", "2", "--test", "weak-dpq", "3", "2"], True),
    (["group-check", "--cyclic", "6", "--test", "strong-dpq", "3", "2"], False),
    (["group-check", "--cyclic", "4", "--test", "relation", "x1^4"], True),
])
def test_group_check(argv, verdict):
    code, out, _ = run(argv)
    assert code == cli.EXIT_OK
    data = json.loads(out)
    assert data["verdict"] is verdict
    if not verdict and "witness" in data:
        assert data["witness"] is not None


def test_group_check_from_json(tmp_path):
    from gtype.groups import perm_group
    G = perm_group(["(1 2 3)", "(1 2)(3 4)"])
    path = tmp_path / "a4.json"
    path.write_text(json.dumps(G.to_json()))
    code, out, _ = run(["group-check", "--group-json", str(path), "--test", "genA4"])
    assert code == 0 and json.loads(out)["verdict"] is True


@pytest.mark.parametrize("argv", [
    ["group-check", "--perm", "(1 2 3", "--test", "genA4"],
    ["group-check", "--perm", "(1 2 3)", "--test", "bogus"],
    ["group-check", "--cyclic", "0", "--test", "genA4"],
    ["group-check", "--cyclic", "4", "--test", "relation", "x1^^2"],
    ["group-check", "--cyclic", "4", "--test", "weak-dpq", "3"],
    ["group-check", "--group-json", "/nonexistent.json", "--test", "genA4"],
    ["torsion", "--coeffs", "0,0,0,0,0"],
    ["torsion", "--coeffs", "1,2,x"],
    ["nonsense"],
])
def test_input_errors(argv):
    code, out, _ = run(argv)
    assert code == cli.EXIT_INPUT


@pytest.mark.parametrize("coeffs,field,expected", [
    ("0,0,0,0,2", "A4inf", [3, 9]),
    ("0,0,0,1,0", "A4inf", [4, 4]),
    ("0,-1,1,-10,-20", "QA4", [1, 5]),
])
def test_torsion_coeffs(coeffs, field, expected):
    code, out, _ = run(["torsion", "--coeffs", coeffs, "--field", field])
    assert code == 0
    assert json.loads(out)["torsion"] == expected


def test_torsion_label_with_trace(env):
    code, out, _ = run(["torsion", "--label", "11a2", "--trace"])
    data = json.loads(out)
    assert code == 0 and data["torsion"] == [1, 1] and data["trace"]


def test_torsion_batch_from_stdin(env, monkeypatch):
    monkeypatch.setenv("GTYPE_OFFLINE", "1")
    code, out, _ = run(["torsion", "--jobs", "2"], stdin="# batch\n49a1\n0,0,0,0,2\n\n9001a1\n")
    data = json.loads(out)
    assert [d.get("torsion") for d in data[:2]] == [[2, 14], [3, 9]]
    assert data[2]["error"] == "network" and data[2]["input"] == "9001a1"
    assert code == cli.EXIT_NETWORK


def test_torsion_batch_mixed_input_error(env):
    code, out, _ = run(["torsion", "--coeffs", "0,0,0,0,0", "--label", "11a1"])
    data = json.loads(out)
    assert data[0]["error"] == "input" and data[1]["torsion"] == [1, 5]
    assert code == cli.EXIT_INPUT


def test_fetch_command(env, monkeypatch):
    code, out, _ = run(["fetch", "49a1"])
    assert code == 0
    assert json.loads(out) == {"label": "49a1", "coefficients": ["1", "-1", "0", "-2", "-1"],
                               "source": "local", "j": "-3375"}
    code, out, _ = run(["fetch", "badlabel!"])
    assert code == cli.EXIT_INPUT
    monkeypatch.setenv("GTYPE_OFFLINE", "1")
    code, out, _ = run(["fetch", "9001a1"])
    assert code == cli.EXIT_NETWORK
    assert json.loads(out)["error"] == "OfflineError"


def test_fetch_command_remote(env):
    code, out, _ = run(["fetch", "9001a1", "--no-fixtures"])
    assert code == 0 and json.loads(out)["source"] == "remote"


def test_verify_paper_quick_suites():
    code, out, err = run(["verify-paper", "--suite", "gtype", "--suite", "gl2", "--suite", "families"])
    data = json.loads(out)
    names = {r["check"] for r in data["checks"]}
    assert {"cyclotomic-scan", "mod3-full-torsion", "disc-square"} <= names
    assert code == 0 and data["failed"] == 0
    assert "[PASS] gtype/cyclotomic-scan" in err


def test_verify_paper_single_check_is_deterministic():
    argv = ["--seed", "7", "verify-paper", "--check", "uniqueness-audit", "--samples", "5"]
    a, b = run(argv), run(argv)
    assert a[0] == 0
    strip = lambda s: [{k: v for k, v in r.items() if k != "seconds"} for r in json.loads(s)["checks"]]
    assert strip(a[1]) == strip(b[1])


def test_catalog_command(tmp_path):
    code, out, _ = run(["catalog"])
    assert code == 0 and len(json.loads(out)["jmaps"]) == 26
    path = tmp_path / "cat.json"
    assert run(["catalog", "--out", str(path)])[0] == 0
    assert json.loads(path.read_text()) == json.loads(out)


def test_output_is_stable_json():
    _, a, _ = run(["torsion", "--coeffs", "0,0,0,0,2", "--trace"])
    _, b, _ = run(["torsion", "--coeffs", "0,0,0,0,2", "--trace"])
    assert a == b
    assert a == json.dumps(json.loads(a), indent=2, sort_keys=True) + "\n"
