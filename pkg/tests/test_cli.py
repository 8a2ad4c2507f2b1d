import json
import subprocess
import sys

import pytest

from lcft.aj import HAT
from lcft.artin_hasse import artin_hasse_F
from lcft.cli import run
from lcft.gf import GF, GF_q
from lcft.literal import parse_series


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


def test_lt_fiber(capsys):
    code, out, _ = call(capsys, "lt", "fiber", "--q", "2", "--m", "2", "--prec", "16")
    assert code == 0
    assert out == "PASS: F(g) = (−T+That)·g"


def test_ah_F(capsys):
    code, out, _ = call(capsys, "ah", "F", "--p", "2", "--prec", "5")
    assert code == 0 and out == "1 + t + t^3 + t^4 (mod t^5)"


def test_aj_check_failure(capsys):
    code, out, _ = call(capsys, "aj", "check", "1 (mod That^4)")
    assert code == 1 and "condition (1) fails" in out


def test_aj_check_member(capsys):
    code, out, _ = call(capsys, "aj", "check", "1 - 1*T^-1*That^1 (mod That^8)", "--field", "3")
    # T^-1 That is not the canonical member: evaluating at That = T gives 0, but the
    # quotient is not integral
    assert code == 1
    code, out, _ = call(capsys, "aj", "check", "1 - T*That^-1 (mod That^8)")
    assert code == 0 and out.startswith("member")


def test_parse_error_exit_code(capsys):
    code, _, err = call(capsys, "aj", "check", "T^^2")
    assert code == 2 and "parse error" in err
    code, _, err = call(capsys, "aj", "check", "1", "--field", "2^2:1,0,1")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        run(["aj", "frobnicate"])
    assert exc.value.code == 2


def test_domain_error_exit_code(capsys):
    code, out, _ = call(capsys, "recip", "as", "--a", "0", "--n", "1")
    assert code == 1 and "trivial class" in out


def test_json_schema(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = call(capsys, "twodim", "galois", "--window", "2,2", "--q", "4", "--format", "json",
                        "--out", str(target))
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"command", "inputs", "result", "certificates"}
    assert payload["command"] == "twodim galois"
    assert payload["result"]["group_order"] == payload["result"]["kernel_points"] == 64
    assert json.loads(target.read_text()) == payload


def test_env_precision(capsys, monkeypatch):
    monkeypatch.setenv("LCFT_PREC", "7")
    code, out, _ = call(capsys, "ah", "F", "--p", "3")
    assert code == 0 and out.endswith("(mod t^7)")


SERIES_COMMANDS = [
    (["ah", "F", "--p", "3", "--prec", "12"], GF(3)),
    (["ah", "compose", "--coords", "1,0:w; 3,1:1", "--field", "2^2", "--prec", "16"], GF(2, 2)),
    (["aj", "ratio", "1 - T*That^-1 (mod That^8)", "(1 + T*That)*(1 - T*That^-1) (mod That^8)"], GF(2)),
    (["twodim", "normalform", "T^3 + S^-4*T^-2 + w*S^-3", "--window", "8,8", "--q", "4"], GF(2, 2)),
]


@pytest.mark.parametrize("argv,field", SERIES_COMMANDS, ids=lambda a: " ".join(a[:2]) if isinstance(a, list) else "")
def test_printed_literals_reparse(capsys, argv, field):
    from lcft.literal import parse_bivar
    code, out, _ = call(capsys, *argv, "--format", "json")
    assert code == 0
    text = json.loads(out)["result"]
    if argv[0] == "twodim":
        value = parse_bivar(text, field)
        code, out2, _ = call(capsys, *argv[:2], text, *argv[3:], "--format", "json")
        assert parse_bivar(json.loads(out2)["result"], field) == value  # normal forms are fixed points
    else:
        value = parse_series(text, field)
        from lcft.literal import format_series
        assert format_series(value) == text


def test_ah_F_literal_matches_library(capsys):
    code, out, _ = call(capsys, "ah", "F", "--p", "5", "--prec", "20")
    assert parse_series(out, GF(5)) == artin_hasse_F(5, 20)


def test_ah_decompose_recomposes(capsys):
    code, out, _ = call(capsys, "ah", "decompose", "1 + t + t^2 (mod t^10)")
    assert code == 0 and "a[1,0] = 1" in out


def test_alphadlog_of_point(capsys):
    code, out, _ = call(capsys, "ah", "alphadlog", "1 - T^-1*That (mod That^6, T^16)", "--field", "3")
    assert code == 0
    assert "n=1: T^-1" in out and "n=2: 2*T^-2" in out


def test_recip_commands(capsys):
    code, out, _ = call(capsys, "recip", "kummer", "--n", "3", "--field", "2^2")
    assert code == 0 and "fiber: y, w*y, (w + 1)*y" in out
    code, out, _ = call(capsys, "recip", "as", "--a", "1", "--n", "2", "--field", "3")
    assert code == 0 and out == "x^3 - x = 2*T^-2 (mod T^8)"
    code, out, _ = call(capsys, "recip", "invariance", "1 - T*That^-1 (mod That^8)",
                        "(1 + T*That)*(1 - T*That^-1) (mod That^8)")
    assert code == 0


def test_lt_commands(capsys):
    code, out, _ = call(capsys, "lt", "build", "--q", "3", "--m", "2")
    assert code == 0 and "x^2 + T = 0" in out
    code, out, _ = call(capsys, "lt", "galois", "--q", "2", "--m", "2", "--u", "1+T")
    assert code == 0 and out == "sigma_u(alpha_2) = T + a2"
    code, out, _ = call(capsys, "lt", "identity", "--q", "2", "--m", "3")
    assert code == 0 and "4 unit(s)" in out


def test_twodim_commands(capsys):
    code, out, _ = call(capsys, "twodim", "symbol", "--window", "1,2")
    assert code == 0 and out.splitlines() == ["(1,1): S^-1*T^-1", "(1,2): S^-1*T^-2"]
    code, out, _ = call(capsys, "twodim", "cartier", "--window", "4,4", "--coeffs", "1,1:w", "--field", "2^2")
    assert code == 0 and out == "(2,2): w + 1"
    code, out, _ = call(capsys, "twodim", "kernel", "--window", "4,4", "--coeffs", "1,1:1;2,2:1;4,4:1")
    assert code == 0
    code, out, _ = call(capsys, "twodim", "kernel", "--window", "4,4", "--coeffs", "2,2:1")
    assert code == 1
    code, out, _ = call(capsys, "twodim", "fiber", "--window", "2,2")
    assert code == 0 and out.startswith("PASS")


def test_dmod_commands(capsys):
    code, out, _ = call(capsys, "dmod", "d", "S^-1*T^-1")
    assert code == 0 and out == "(-S^-2*T^-1) dS + (-S^-1*T^-2) dT"
    code, out, _ = call(capsys, "dmod", "closed", "--aS", "T")
    assert code == 1
    code, out, _ = call(capsys, "dmod", "decompose", "--aS", "1/2*S^-1 - S^-2*T^-1", "--aT=-S^-1*T^-2")
    assert code == 0 and "A = 1/2" in out and "h = S^-1*T^-1" in out
    code, out, _ = call(capsys, "dmod", "image", "--aS=-S^-2*T^-1", "--aT=-S^-1*T^-2")
    assert code == 0
    code, out, _ = call(capsys, "dmod", "pullback", "--coeffs", "1,2:3")
    assert code == 0 and out == "(-3*S^-2*T^-2) dS + (-6*S^-1*T^-3) dT"


def test_verify_is_deterministic(capsys):
    code, out1, _ = call(capsys, "verify", "--seed", "3", "--format", "json")
    assert code == 0
    code, out2, _ = call(capsys, "verify", "--seed", "3", "--format", "json")
    strip = lambda s: [{k: v for k, v in r.items() if k != "seconds"} for r in json.loads(s)["result"]]
    assert strip(out1) == strip(out2)
    assert len(strip(out1)) == 10 and all(r["ok"] for r in strip(out1))


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lcft", "ah", "F", "--p", "2", "--prec", "5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "1 + t + t^3 + t^4 (mod t^5)"
