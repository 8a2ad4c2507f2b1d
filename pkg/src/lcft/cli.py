"""Command-line front end: ``lcft <group> <action> [options]``.

Exit status: 0 on success, 1 when a checked identity or membership fails
(or the input is outside an operation's domain), 2 on unparseable input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from lcft import acceptance, aj, artin_hasse, dmod, lubin_tate, reciprocity, two_dim
from lcft.gf import FieldElem, GF_q, parse_field_spec
from lcft.literal import (LiteralError, format_bivar, format_coeff, format_series, parse_bivar, parse_coeff,
                          parse_series)
from lcft.polyring import QElem
from lcft.series import QQ, BivarLaurent, PrecisionError, TruncSeries


class CheckFailed(Exception):
    """A verified statement turned out false; exit status 1."""


def default_prec() -> int:
    try:
        return int(os.environ.get("LCFT_PREC", "16"))
    except ValueError:
        return 16


def render(x):
    if isinstance(x, TruncSeries):
        return format_series(x)
    if isinstance(x, BivarLaurent):
        return format_bivar(x)
    if isinstance(x, (FieldElem, Fraction, QElem)):
        return format_coeff(x) if not isinstance(x, QElem) else str(x)
    if isinstance(x, dict):
        return {(",".join(map(str, k)) if isinstance(k, tuple) else str(k)): render(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [render(v) for v in x]
    if isinstance(x, dmod.OneFormQ):
        return {"dS": render(x.aS), "dT": render(x.aT)}
    return x


def parse_window(text: str) -> tuple[int, int]:
    try:
        I, J = (int(t) for t in text.split(","))
    except ValueError as exc:
        raise LiteralError(f"window must look like I,J, got {text!r}") from exc
    return I, J


def parse_index_map(text: str, base) -> dict:
    """'i,j:c; i,j:c' -> {(i, j): c} (a single index 'n:c' is also accepted)."""
    out = {}
    if not text.strip():
        return out
    for part in text.split(";"):
        if not part.strip():
            continue
        try:
            idx, val = part.split(":")
            key = tuple(int(t) for t in idx.split(","))
        except ValueError as exc:
            raise LiteralError(f"bad index entry {part!r}") from exc
        out[key if len(key) > 1 else key[0]] = parse_coeff(val, base)
    return out


def _precision(args) -> int:
    prec = args.prec if args.prec is not None else default_prec()
    if prec < 2:
        raise LiteralError("precision must be >= 2")
    return prec


def _field(args):
    if getattr(args, "q", None):
        return GF_q(args.q)
    try:
        return parse_field_spec(args.field)
    except ValueError as exc:
        raise LiteralError(str(exc)) from exc


def _aj_literal(text: str, args):
    field = _field(args)
    N = _precision(args)
    return parse_series(text, field, prec=N, var=aj.HAT, inner_prec=args.tprec or 2 * N, inner_var="T")


def _any_literal(text: str, args):
    """A series in one variable, or a nested That/T literal."""
    field = _field(args)
    N = _precision(args)
    return parse_series(text, field, prec=N, inner_prec=args.tprec or 2 * N)


# --- handlers: each returns (inputs, result, certificates, text) ------------------

def cmd_aj(args):
    if args.action == "check":
        f = _aj_literal(args.f, args)
        cert = aj.is_aj(f)
        certs = {"condition1": cert.condition1, "condition2": cert.condition2,
                 "quotient": render(cert.quotient) if cert.quotient is not None else None}
        if not cert:
            raise CheckFailed(cert.reason, {"f": render(f)}, certs)
        return {"f": render(f)}, True, certs, f"member; quotient = {render(cert.quotient)}"
    if args.action == "ratio":
        f, g = _aj_literal(args.f, args), _aj_literal(args.g, args)
        u = aj.aj_ratio(f, g)
        ok = f * u == g
        if not ok:
            raise CheckFailed("f * u != g", {"f": render(f), "g": render(g)}, {})
        return {"f": render(f), "g": render(g)}, render(u), {"f*u == g": ok}, render(u)
    if args.action == "split":
        f = _aj_literal(args.f, args)
        field = _field(args)
        prime = parse_series(args.prime, field, prec=2 * _precision(args), var="T")
        unit, v = aj.split_coords(f, prime)
        res = {"unit": render(unit), "valuation": v}
        return {"f": render(f), "prime": render(prime)}, res, {}, f"unit = {render(unit)}\nvaluation = {v}"
    raise AssertionError(args.action)


def cmd_ah(args):
    N = _precision(args)
    field = _field(args)
    if args.action == "F":
        p = args.p or field.p
        F = artin_hasse.artin_hasse_F(p, N)
        return {"p": p, "prec": N}, render(F), {}, render(F)
    if args.action == "compose":
        entries = parse_index_map(args.coords or "", field)
        coords = artin_hasse.WittCoords(field.p, N, entries)
        u = artin_hasse.ah_compose(coords, N, field)
        return {"coords": render(entries)}, render(u), {}, render(u)
    if args.action == "decompose":
        u = parse_series(args.u, field, prec=N, var="t" if "That" not in args.u else None)
        coords = artin_hasse.ah_decompose(u, N)
        back = artin_hasse.ah_compose(coords, min(N, u.prec), field)
        if not (back == u):
            raise CheckFailed("recomposition differs from the input", {"u": render(u)}, {})
        res = {f"{n},{m}": render(a) for (n, m), a in sorted(coords.entries.items())}
        text = "\n".join(f"a[{k}] = {v}" for k, v in res.items()) or "all coordinates zero"
        return {"u": render(u)}, res, {"recomposed": True}, text
    if args.action == "alphadlog":
        u = _any_literal(args.u, args)
        coords = artin_hasse.alpha_dlog(u, N)
        res = {str(n): render(c) for n, c in coords.entries.items()}
        text = "\n".join(f"n={n}: {v}" for n, v in res.items())
        return {"u": render(u)}, res, {}, text
    raise AssertionError(args.action)


def cmd_recip(args):
    field = _field(args)
    if args.action == "kummer":
        d = reciprocity.kummer_pullback(args.n, field, _precision(args))
        certs = {"eisenstein": d.eisenstein, "simply_transitive": d.simply_transitive,
                 "cyclic_of_order_n": d.cyclic_of_order_n}
        if not all(certs.values()):
            raise CheckFailed("Kummer pullback checks failed", {"n": args.n}, certs)
        res = {"equation": f"y^{args.n} = {format_coeff(d.base_point)}",
               "fiber": [str(x) for x in d.fiber],
               "characters": {str(z): k for z, k in d.character_table.items()}}
        text = f"{res['equation']}\nfiber: {', '.join(res['fiber'])}\n" + \
            "\n".join(f"sigma_{z} -> {k} mod {args.n}" for z, k in res["characters"].items())
        return {"n": args.n, "field": field.spec()}, res, certs, text
    if args.action == "as":
        a = parse_coeff(args.a, field)
        d = reciprocity.as_pullback(a, args.n, field)
        if not all(d.checks.values()):
            raise CheckFailed("rhs != a/(n T^n)", {"a": str(a), "n": args.n}, d.checks)
        return {"a": str(a), "n": args.n}, d.equation(), d.checks, d.equation()
    if args.action == "invariance":
        f1, f2 = _aj_literal(args.f1, args), _aj_literal(args.f2, args)
        ok = reciprocity.eta_invariance_check(f1, f2)
        if not ok:
            raise CheckFailed("character data differ", {"f1": render(f1), "f2": render(f2)}, {})
        return {"f1": render(f1), "f2": render(f2)}, True, {}, "PASS: character data agree"
    raise AssertionError(args.action)


def _unit_arg(text, field, m):
    return parse_series(text, field, prec=m, var="T")


def cmd_lt(args):
    field = _field(args)
    M = _precision(args)
    tower = lubin_tate.build_tower(args.m, field, M)
    inputs = {"q": field.q, "m": args.m, "prec": M}
    if args.action == "build":
        q = field.q
        eqs = [f"x^{q - 1} + T = 0"] + [f"x^{q} + T*x = alpha_{j}" for j in range(1, args.m)]
        res = {"levels": [lvl.degree for lvl in tower.levels], "equations": eqs}
        text = "\n".join(f"alpha_{j + 1}: {e} (relative degree {lvl.degree})"
                         for j, (e, lvl) in enumerate(zip(eqs, tower.levels)))
        return inputs, res, {"certified": True}, text
    if args.action == "fiber":
        ok = lubin_tate.verify_fiber(tower, args.m)
        if not ok:
            raise CheckFailed("F(g) != (−T+That)·g", inputs, {})
        return inputs, True, {}, "PASS: F(g) = (−T+That)·g"
    if args.action == "galois":
        u = _unit_arg(args.u or "1+T", field, args.m)
        img = lubin_tate.galois_act(u, tower.alpha(args.m), tower)
        inputs["u"] = render(u)
        return inputs, str(img), {}, f"sigma_u(alpha_{args.m}) = {img}"
    if args.action == "identity":
        units = [_unit_arg(args.u, field, args.m)] if args.u else lubin_tate.units_mod(field, args.m)
        bad = [render(u) for u in units if not lubin_tate.galois_series_identity(u, tower, args.m)]
        if bad:
            raise CheckFailed(f"identity fails for {bad}", inputs, {})
        return inputs, True, {"units_checked": len(units)}, f"PASS: identity holds for {len(units)} unit(s)"
    raise AssertionError(args.action)


def cmd_twodim(args):
    field = _field(args)
    window = parse_window(args.window)
    p = field.p
    inputs = {"window": list(window), "field": field.spec()}
    if args.action == "symbol":
        form = two_dim.symbol_dlog(window, field)
        res = render(form.coeffs)
        return inputs, res, {"matches_closed_formula": True}, \
            "\n".join(f"({k}): {v}" for k, v in res.items()) or "0"
    if args.action in ("cartier", "kernel"):
        coeffs = parse_index_map(args.coeffs or "", field)
        omega = two_dim.TwoForm(p, window, coeffs)
        inputs["coeffs"] = render(coeffs)
        if args.action == "cartier":
            out = two_dim.inverse_cartier_minus_one(omega)
            res = render(out.coeffs)
            return inputs, res, {}, "\n".join(f"({k}): {v}" for k, v in res.items()) or "0"
        member, proj = two_dim.kernel_test_and_project(omega)
        res = {"member": member, "projection": render(proj.entries)}
        if not member:
            raise CheckFailed("not in the kernel of C^-1 - 1", inputs, res)
        return inputs, res, {}, "in kernel; projection " + json.dumps(res["projection"])
    if args.action == "normalform":
        I, J = window
        f = parse_bivar(args.f, field, (-I, I, -J, J))
        r = two_dim.wp_q_normal_form(f, field.q)
        if not r.verified:
            raise CheckFailed("witness does not verify", inputs, {})
        inputs["f"] = render(f)
        return inputs, render(r.form), {"witness": render(r.witness), "verified": True}, \
            f"{render(r.form)}\nwitness x = {render(r.witness)}"
    if args.action == "galois":
        g = two_dim.as_system_galois(window, field)
        res = {"generators": [[i, j] for i, j, _ in g.system.generators], "rank": g.rank,
               "group_order": g.group_order, "kernel_points": g.kernel_points}
        certs = {"rank == n*r": g.independent, "order == kernel points": g.group_order == g.kernel_points}
        if not all(certs.values()):
            raise CheckFailed("Galois data inconsistent", inputs, certs)
        text = (f"generators: {res['generators']}\nrank {g.rank} = {field.n}*{g.generator_count}\n"
                f"group order {g.group_order} = kernel points {g.kernel_points}")
        return inputs, res, certs, text
    if args.action == "fiber":
        ok = two_dim.fiber_check_2d(window, field)
        if not ok:
            raise CheckFailed("(F - 1) x differs from the symbol", inputs, {})
        return inputs, True, {}, "PASS: (F-1) sum x_ij = dlog of the symbol on primitive indices"
    raise AssertionError(args.action)


def _form(args):
    W = args.window and parse_window(args.window)
    win = None if not W else (-W[0], W[0], -W[1], W[1])
    return dmod.OneFormQ(parse_bivar(args.aS or "0", QQ, win), parse_bivar(args.aT or "0", QQ, win))


def cmd_dmod(args):
    if args.action == "d":
        f = parse_bivar(args.f, QQ)
        w = dmod.exterior_derivative(f)
        return {"f": render(f)}, render(w), {"closed": dmod.is_closed(w)}, str(w)
    if args.action == "pullback":
        coeffs = parse_index_map(args.coeffs or "", QQ)
        w = dmod.phi1_pullback(coeffs)
        return {"coeffs": render(coeffs)}, render(w), {}, str(w)
    w = _form(args)
    inputs = {"aS": render(w.aS), "aT": render(w.aT)}
    if args.action == "closed":
        ok = dmod.is_closed(w)
        if not ok:
            raise CheckFailed("form is not closed", inputs, {})
        return inputs, True, {}, "closed"
    if args.action == "decompose":
        r = dmod.decompose_one_form(w)
        res = {"A": str(r.A), "B": str(r.B), "h": render(r.h), "absorbed": render(r.absorbed)}
        certs = {"reassembles": r.reassemble() == w, "A_int": r.A_int, "B_int": r.B_int}
        text = f"A = {r.A} (mod Z)\nB = {r.B} (mod Z)\nh = {render(r.h)}\nabsorbed = {render(r.absorbed)}"
        return inputs, res, certs, text
    if args.action == "image":
        ok = dmod.in_image_test(w)
        if not ok:
            raise CheckFailed("not in the image", inputs, {})
        return inputs, True, {}, "in image"
    raise AssertionError(args.action)


def cmd_verify(args):
    results = acceptance.run_all(args.seed)
    res = [{"number": r.number, "name": r.name, "ok": r.ok, "detail": r.detail, "seconds": round(r.seconds, 3)}
           for r in results]
    text = "\n".join(r.line() for r in results)
    if not all(r.ok for r in results):
        raise CheckFailed("some checks failed\n" + text, {"seed": args.seed}, {"checks": res})
    return {"seed": args.seed}, res, {}, text


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="2", help="field spec p^n:c_n,...,c_0 (default 2)")
    common.add_argument("--prec", type=int, default=None, help="precision N (default $LCFT_PREC or 16)")
    common.add_argument("--tprec", type=int, default=None, help="T-precision of K-coefficients (default 2N)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="also write the JSON report to this file")

    parser = argparse.ArgumentParser(prog="lcft", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    def group(name, actions, handler, extra):
        g = groups.add_parser(name, parents=[common])
        sub = g.add_subparsers(dest="action", required=True)
        for action in actions:
            a = sub.add_parser(action, parents=[common])
            a.set_defaults(handler=handler)
            for args, kw in extra.get(action, []):
                a.add_argument(*args, **kw)

    group("aj", ["check", "ratio", "split"], cmd_aj, {
        "check": [(("f",), {})],
        "ratio": [(("f",), {}), (("g",), {})],
        "split": [(("f",), {}), (("--prime",), {"default": "T"})],
    })
    group("ah", ["F", "compose", "decompose", "alphadlog"], cmd_ah, {
        "F": [(("--p",), {"type": int})],
        "compose": [(("--coords",), {"help": "n,m:a; ..."})],
        "decompose": [(("u",), {})],
        "alphadlog": [(("u",), {})],
    })
    group("recip", ["kummer", "as", "invariance"], cmd_recip, {
        "kummer": [(("--n",), {"type": int, "required": True})],
        "as": [(("--a",), {"default": "1"}), (("--n",), {"type": int, "required": True})],
        "invariance": [(("f1",), {}), (("f2",), {})],
    })
    lt_opts = [(("--q",), {"type": int, "default": 2}), (("--m",), {"type": int, "default": 2}),
               (("--u",), {"default": None})]
    group("lt", ["build", "fiber", "galois", "identity"], cmd_lt,
          {a: lt_opts for a in ("build", "fiber", "galois", "identity")})
    td = [(("--window",), {"default": "2,2"}), (("--q",), {"type": int, "default": None})]
    group("twodim", ["symbol", "cartier", "kernel", "normalform", "galois", "fiber"], cmd_twodim, {
        "symbol": td, "galois": td, "fiber": td,
        "cartier": td + [(("--coeffs",), {"help": "i,j:a; ..."})],
        "kernel": td + [(("--coeffs",), {"help": "i,j:a; ..."})],
        "normalform": td + [(("f",), {})],
    })
    form = [(("--aS",), {"default": "0"}), (("--aT",), {"default": "0"}), (("--window",), {"default": None})]
    group("dmod", ["d", "closed", "decompose", "pullback", "image"], cmd_dmod, {
        "d": [(("f",), {})], "closed": form, "decompose": form, "image": form,
        "pullback": [(("--coeffs",), {"help": "n,m:c; ..."})],
    })
    v = groups.add_parser("verify", parents=[common])
    v.set_defaults(handler=cmd_verify, action=None)
    return parser


def _emit(args, payload: dict, text: str, stream) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, default=str), file=stream)
    else:
        print(text, file=stream)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2, default=str)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.group + (f" {args.action}" if args.action else "")
    try:
        inputs, result, certs, text = args.handler(args)
    except CheckFailed as exc:
        msg, *rest = exc.args
        inputs, certs = (rest + [{}, {}])[:2]
        payload = {"command": command, "inputs": inputs, "result": False, "certificates": certs, "error": msg}
        _emit(args, payload, f"FAIL: {msg}", sys.stdout)
        return 1
    except LiteralError as exc:
        print(f"lcft: parse error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, PrecisionError, KeyError) as exc:
        payload = {"command": command, "inputs": {}, "result": False, "certificates": {}, "error": str(exc)}
        _emit(args, payload, f"FAIL: {exc}", sys.stdout)
        return 1
    payload = {"command": command, "inputs": inputs, "result": result, "certificates": certs}
    _emit(args, payload, text, sys.stdout)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
