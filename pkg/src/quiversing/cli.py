"""Command-line front end.

Commands read a workspace file (or stdin when the file argument is omitted
or '-') and print either a short text report or, with --json, a stable
machine-readable report.  Exit codes: 0 = success / property holds,
1 = negative mathematical result, 2 = input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone

from .chain import (
    ChainError,
    HypothesesError,
    VerificationError,
    check_hypotheses,
    singularity_type,
    verify_rank_one,
    verify_span,
)
from .degeneration import codim, hom_order_check
from .fields import field_from_name
from .homological import SESError, delta, delta_prime, ext1_dim, make_ses
from .linalg import LinAlgError
from .quiver import QuiverError, hom_dim
from .workspace import (
    WorkspaceError,
    Workspace,
    emit_workspace,
    gen_star,
    parse_workspace,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quiversing",
        description="Exact homological invariants of quiver representations and "
                    "singularity degrees of codimension-2 orbit degenerations.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--no-timestamp", action="store_true",
                        help="omit the timestamp field from JSON reports")
    common.add_argument("--field", default="q", metavar="q|fp:P",
                        help="scalar backend (default: exact rationals)")

    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")

    def ws_command(name, n_names, names_help, parents=(), **kwargs):
        p = sub.add_parser(name, parents=[common, *parents], **kwargs)
        p.add_argument("args", nargs="+", metavar="[FILE] " + names_help,
                       help="workspace file (or stdin) followed by names")
        p.set_defaults(n_names=n_names)
        return p

    ws_command("hom", 2, "X Y", help="dimension of Hom(X, Y)")
    ws_command("ext", 2, "V U", help="dimension of Ext^1(V, U)")
    ws_command("delta", 3, "F G X",
               help="delta and delta' of the sequence (F, G) against X")
    ws_command("codim", 2, "M N", help="orbit codimension [N,N] - [M,M]")
    p = ws_command("homorder", 2, "M N",
                   help="necessary hom-order checks for N a degeneration of M")
    p.add_argument("--probes", default=None,
                   help="comma-separated representation names overriding the probe set")
    ws_command("check-hyp", 3, "M U V", parents=[seeded],
               help="check the codimension-2 singularity-type hypotheses for N = U + V")
    p = ws_command("sing-type", 3, "M U V", parents=[seeded],
                   help="singularity type of the orbit closure of M at N = U + V")
    p.add_argument("--cap", type=int, default=None, help="chain iteration cap override")
    p = ws_command("verify-chain", 3, "M U V", parents=[seeded],
                   help="run the chain and verify the rank-one and span properties")
    p.add_argument("--cap", type=int, default=None, help="chain iteration cap override")
    p.add_argument("--samples", type=int, default=20, help="sample count (default 20)")

    gen = sub.add_parser("gen", parents=[common], help="generate example workspaces")
    gen_sub = gen.add_subparsers(dest="generator", required=True)
    star = gen_sub.add_parser("star", help="the star-quiver family")
    star.add_argument("--n", type=int, required=True, help="number of arms (>= 3)")
    star.add_argument("--points", default=None,
                      help="space-separated projective points 'a,b a,b ...'")
    star.add_argument("--out", default=None, help="write to a file instead of stdout")
    return parser


def _split_file_and_names(parser, ns):
    values = ns.args
    if len(values) == ns.n_names:
        return None, values
    if len(values) == ns.n_names + 1:
        return values[0], values[1:]
    parser.error(f"expected [FILE] plus {ns.n_names} names, got {len(values)} arguments")


def _load_workspace(path, field) -> Workspace:
    if path is None or path == "-":
        return parse_workspace(sys.stdin.read(), field=field)
    with open(path, "r", encoding="utf-8") as fh:
        return parse_workspace(fh.read(), field=field)


def _parse_points(text):
    points = []
    for chunk in text.split():
        parts = chunk.split(",")
        if len(parts) != 2:
            raise WorkspaceError(f"bad point {chunk!r}: expected 'a,b'")
        points.append((parts[0], parts[1]))
    return points


class _Report:
    """Collects the text lines and JSON fields of one command run."""

    def __init__(self, command, inputs, seed=None):
        self.command = command
        self.inputs = inputs
        self.seed = seed
        self.lines: list[str] = []
        self.results: dict = {}
        self.degree = None
        self.delta_log = None
        self.exit_code = EXIT_OK

    def say(self, line: str):
        self.lines.append(line)

    def emit(self, ns) -> int:
        if ns.json:
            payload = {
                "command": self.command,
                "inputs": self.inputs,
                "field": ns.field,
                "seed": self.seed,
                "results": self.results,
                "degree": self.degree,
                "delta_log": self.delta_log,
                "exit_code": self.exit_code,
            }
            if not ns.no_timestamp:
                payload["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
            print(json.dumps(payload, sort_keys=True, separators=(", ", ": ")))
        else:
            for line in self.lines:
                print(line)
            if self.seed is not None:
                print(f"seed: {self.seed}")
        return self.exit_code


def _cmd_hom(ns, ws, names, report):
    x, y = (ws.rep(n) for n in names)
    value = hom_dim(x, y)
    report.results["hom_dim"] = value
    report.say(str(value))


def _cmd_ext(ns, ws, names, report):
    v, u = (ws.rep(n) for n in names)
    value = ext1_dim(v, u)
    report.results["ext1_dim"] = value
    report.say(str(value))


def _cmd_delta(ns, ws, names, report):
    f = ws.morphism(names[0])
    g = ws.morphism(names[1])
    x = ws.rep(names[2])
    seq = make_ses(f, g)
    d, dp = delta(seq, x), delta_prime(seq, x)
    report.results.update(delta=d, delta_prime=dp)
    report.say(f"delta={d} delta_prime={dp}")


def _cmd_codim(ns, ws, names, report):
    m, n = (ws.rep(nm) for nm in names)
    value = codim(m, n)
    report.results["codim"] = value
    report.say(str(value))


def _cmd_homorder(ns, ws, names, report):
    m, n = (ws.rep(nm) for nm in names)
    probes = None
    if ns.probes:
        probes = [(nm, ws.rep(nm)) for nm in ns.probes.split(",")]
    hret = hom_order_check(m, n, probes=probes)
    report.results["probes"] = [
        {"probe": r.label, "hom_m_y": r.hom_m_y, "hom_n_y": r.hom_n_y,
         "hom_y_m": r.hom_y_m, "hom_y_n": r.hom_y_n, "ok": r.ok}
        for r in hret.results
    ]
    report.results["ok"] = hret.ok
    for r in hret.results:
        status = "ok" if r.ok else "VIOLATION"
        report.say(f"{status}: probe {r.label}: [M,Y]={r.hom_m_y} [N,Y]={r.hom_n_y} "
                   f"[Y,M]={r.hom_y_m} [Y,N]={r.hom_y_n}")
    if hret.ok:
        report.say("hom order respected on all probes")
    else:
        report.say("hom order violated: N is not a degeneration of M")
        report.exit_code = EXIT_NEGATIVE


def _hyp_lines(report, hyp):
    report.results["hypotheses"] = {
        "hom_u_m": hyp.hom_u_m, "hom_u_n": hyp.hom_u_n,
        "hom_m_v": hyp.hom_m_v, "hom_n_v": hyp.hom_n_v,
        "codim": hyp.codim,
        "left_ok": hyp.left_ok, "right_ok": hyp.right_ok, "codim_ok": hyp.codim_ok,
        "ok": hyp.ok,
    }
    report.say(f"[U,M]={hyp.hom_u_m} [U,N]={hyp.hom_u_n} -> "
               f"{'ok' if hyp.left_ok else 'FAIL'}")
    report.say(f"[M,V]={hyp.hom_m_v} [N,V]={hyp.hom_n_v} -> "
               f"{'ok' if hyp.right_ok else 'FAIL'}")
    report.say(f"codim={hyp.codim} -> {'ok' if hyp.codim_ok else 'FAIL'}")


def _cmd_check_hyp(ns, ws, names, report):
    m, u, v = (ws.rep(nm) for nm in names)
    hyp = check_hypotheses(m, u, v)
    _hyp_lines(report, hyp)
    if hyp.ok:
        report.say("hypotheses hold")
    else:
        report.say("hypotheses fail")
        report.exit_code = EXIT_NEGATIVE


def _chain_results(report, chain):
    report.degree = chain.degree
    report.delta_log = [list(entry) for entry in chain.delta_log]
    report.results["split_index"] = chain.split_index


def _cmd_sing_type(ns, ws, names, report):
    m, u, v = (ws.rep(nm) for nm in names)
    try:
        stype, chain = singularity_type(m, u, v, seed=ns.seed, cap=ns.cap)
    except HypothesesError as exc:
        _hyp_lines(report, exc.report)
        report.say("hypotheses fail")
        report.exit_code = EXIT_NEGATIVE
        return
    report.results["singularity_type"] = str(stype)
    report.results["degree"] = stype.degree
    if chain is not None:
        _chain_results(report, chain)
    report.say(str(stype))


def _cmd_verify_chain(ns, ws, names, report):
    m, u, v = (ws.rep(nm) for nm in names)
    try:
        stype, chain = singularity_type(m, u, v, seed=ns.seed, cap=ns.cap)
    except HypothesesError as exc:
        _hyp_lines(report, exc.report)
        report.say("hypotheses fail")
        report.exit_code = EXIT_NEGATIVE
        return
    report.results["singularity_type"] = str(stype)
    report.say(str(stype))
    if chain is None:
        report.results["verified"] = "nothing to verify on the regular branch"
        report.say("regular branch: no chain to verify")
        return
    _chain_results(report, chain)
    try:
        verify_rank_one(chain, samples=ns.samples, seed=ns.seed)
        report.results["rank_one"] = True
        report.say(f"rank-one: pass ({ns.samples} samples)")
        span_ok = verify_span(chain, samples=ns.samples, seed=ns.seed)
        report.results["span"] = span_ok
        if span_ok:
            report.say(f"span: pass (dimension {chain.degree + 1})")
        else:
            report.say("span: FAIL (sample budget did not reach degree+1)")
            report.exit_code = EXIT_NEGATIVE
    except VerificationError as exc:
        report.results["verification_error"] = str(exc)
        report.say(f"verification FAILED: {exc}")
        report.exit_code = EXIT_NEGATIVE


_HANDLERS = {
    "hom": _cmd_hom,
    "ext": _cmd_ext,
    "delta": _cmd_delta,
    "codim": _cmd_codim,
    "homorder": _cmd_homorder,
    "check-hyp": _cmd_check_hyp,
    "sing-type": _cmd_sing_type,
    "verify-chain": _cmd_verify_chain,
}


def _run_gen(ns) -> int:
    if ns.generator != "star":
        raise WorkspaceError(f"unknown generator {ns.generator!r}")
    field = field_from_name(ns.field)
    points = _parse_points(ns.points) if ns.points else None
    ws = gen_star(ns.n, points=points, field=field)
    text = emit_workspace(ws)
    if ns.out:
        with open(ns.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        if ns.command == "gen":
            return _run_gen(ns)
        field = field_from_name(ns.field)
        file_arg, names = _split_file_and_names(parser, ns)
        ws = _load_workspace(file_arg, field)
        inputs = {"file": file_arg or "<stdin>", "names": list(names)}
        report = _Report(ns.command, inputs, seed=getattr(ns, "seed", None))
        handler = _HANDLERS[ns.command]
        handler(ns, ws, names, report)
        return report.emit(ns)
    except (WorkspaceError, QuiverError, SESError, LinAlgError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ChainError as exc:
        print(f"negative result: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
