"""Command line entry point: ``spc <command> ...``.

Exit codes: 0 success, 1 check failure, 2 parse error, 3 size guard.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from contextlib import contextmanager
from pathlib import Path

from . import congruences as cg
from . import filters as fl
from .errors import (
    GiveUp,
    NotSectionallyPseudocomplemented,
    PosetSyntaxError,
    SizeGuardError,
    SpcError,
)
from .fixtures import fixture_text
from .formats import parse_poset, read_document, to_dot, to_json, write_poset
from .generate import REQUIRE, GeneratorConfig, generate
from .poset import find_isomorphism
from .report import Check, Report, RunReport, render
from .star import (
    LATTICE,
    POSET,
    check_star_table,
    classify,
    compare_tables,
    compute_star,
    meet_star_holds,
    verify_lemma_suite,
    verify_variety_identities,
)
from .terms import (
    ideal_terms_lattice,
    is_closed_under,
    maltsev_check_p,
    maltsev_check_q,
    partial_ideal_terms_poset,
    partial_maltsev_check_Q,
)

EXIT_OK, EXIT_CHECK, EXIT_PARSE, EXIT_GUARD = 0, 1, 2, 3


class _Exit(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


@contextmanager
def _timed(run: RunReport, name: str):
    t0 = time.perf_counter()
    yield
    run.timings.append((name, 1000 * (time.perf_counter() - t0)))


def _load(path):
    try:
        return read_document(path)
    except OSError as exc:
        raise _Exit(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from None
    except PosetSyntaxError as exc:
        raise _Exit(EXIT_PARSE, f"{path}: {exc}") from None
    except SpcError as exc:
        # cycles and other order violations are input errors too
        raise _Exit(EXIT_PARSE, f"{path}: {exc}") from None


def _structure(doc, run: RunReport):
    try:
        with _timed(run, "compute_star"):
            return compute_star(doc.poset)
    except NotSectionallyPseudocomplemented as exc:
        a, b = exc.pair
        run.summary.update(n=doc.poset.n, spc=False)
        run.record("not sectionally pseudocomplemented", f"witness=({doc.poset.labels[a]},{doc.poset.labels[b]})")
        rep = run.section(Report("star"))
        rep.add("sectionally-pseudocomplemented", False, [exc.pair])
        return None


def _summary(s, run: RunReport):
    run.summary.update(n=s.n, mode=s.mode, strong=s.strong)


def _has_top(s, run: RunReport) -> bool:
    """Filters, kernels and quotients are all anchored at 1."""
    if s.top is not None:
        return True
    run.section(Report("order")).add("greatest-element", False, detail="none; filters need 1")
    return False


def _sig(args, s):
    sig = args.sig or s.mode
    if sig == LATTICE and not s.is_lattice():
        raise _Exit(EXIT_CHECK, "--sig lattice needs a lattice")
    return sig


def _set(s, f) -> str:
    return render(frozenset(f), s.labels)


def _plot(run: RunReport, args, poset, name, title, highlight=()):
    if not args.plot_dir:
        return
    from .plotting import render_hasse

    out = Path(args.plot_dir)
    out.mkdir(parents=True, exist_ok=True)
    run.figures.append(render_hasse(poset, out / f"{name}.png", title, highlight))


def _stem(path) -> str:
    return Path(path).stem


def cmd_check(args, run: RunReport):
    doc = _load(args.file)
    run.labels = list(doc.poset.labels)
    s = _structure(doc, run)
    if s is None:
        return
    _summary(s, run)
    with _timed(run, "classify"):
        info = classify(s)
        for key, value in info.items():
            if key in ("n", "rpc_witness"):
                continue
            shown = "n/a" if value is None else ("yes" if value else "no")
            run.record("property", key, shown)
        if "rpc_witness" in info:
            run.record("property", "rpc_witness", "(" + ",".join(info["rpc_witness"]) + ")")

    base = run.section(Report("star"))
    base.checks.append(check_star_table(s))
    if doc.star is not None:
        bad = [(a, b, doc.star[a][b], s.star[a][b]) for a, b in compare_tables(doc.star, s.star)]
        base.add("star-table-pin", not bad, bad, detail=f"{len(bad)} mismatches")
    with _timed(run, "lemmas"):
        run.section(verify_lemma_suite(s))
    if s.is_lattice():
        with _timed(run, "lattice"):
            run.section(verify_variety_identities(s))
            m = Report("maltsev")
            m.extend(maltsev_check_p(s))
            q = maltsev_check_q(s)
            m.extend(q)
            run.section(m)
            bad = meet_star_holds(s)
            base.add("meet-star", not bad, bad)
            diff = q.info.get("p_q_differ")
            run.record("property", "p_q_differ", render(diff, s.labels) if diff else "none")
    if s.strong:
        with _timed(run, "partial-maltsev"):
            Q = partial_maltsev_check_Q(s)
            run.section(Q)
            run.record("property", "Q_undefined_triples", len(Q.info["Q_undefined"]))
    _plot(run, args, s.poset, f"{_stem(args.file)}-hasse", _stem(args.file))


def _closed(s, f, definition):
    terms = ideal_terms_lattice() if definition == LATTICE else partial_ideal_terms_poset()
    return is_closed_under(s, f, terms)


def cmd_filters(args, run: RunReport):
    doc = _load(args.file)
    run.labels = list(doc.poset.labels)
    s = _structure(doc, run)
    if s is None:
        return
    _summary(s, run)
    if not _has_top(s, run):
        return
    sig = _sig(args, s)
    run.summary["sig"] = sig
    with _timed(run, "enumerate"):
        masks = fl.enumerate_filters(s, sig, exhaustive=args.exhaustive, literal=args.literal)
    run.record("count", "filters", len(masks))
    for f in masks:
        closed = _closed(s, f, sig)
        run.record("filter", fl.filter_label(s, f, sig), _set(s, f), f"closed={'yes' if closed else 'no'}")
    if not args.literal:
        flat = fl.filter_lattice(s, sig)
        for x, y in flat.hasse_covers():
            run.record("filter-cover", flat.labels[x], flat.labels[y])
        _plot(run, args, flat, f"{_stem(args.file)}-filters", "filters")
    if args.exhaustive:
        fast = fl.enumerate_filters(s, sig, exhaustive=False, literal=args.literal)
        rep = run.section(Report("enumeration"))
        rep.add("exhaustive=up-set-scan", fast == masks,
                [sorted(set(fast) ^ set(masks), key=sorted)] if fast != masks else None)
    if not args.literal:
        with _timed(run, "galois"):
            run.section(cg.verify_galois(s, sig))
            run.section(cg.verify_variety_structure(s, sig))
    _plot(run, args, s.poset, f"{_stem(args.file)}-hasse", _stem(args.file))


def cmd_congruences(args, run: RunReport):
    doc = _load(args.file)
    run.labels = list(doc.poset.labels)
    s = _structure(doc, run)
    if s is None:
        return
    _summary(s, run)
    if not _has_top(s, run):
        return
    sig = _sig(args, s)
    run.summary["sig"] = sig
    with _timed(run, "enumerate"):
        cons = cg.enumerate_congruences(s, sig)
    run.record("count", "congruences", len(cons))
    for c in cons:
        run.record("congruence", c.describe(s.labels), f"kernel={_set(s, cg.kernel(s, c))}")
    with _timed(run, "galois"):
        run.section(cg.verify_galois(s, sig))
        run.section(cg.verify_variety_structure(s, sig))
    with _timed(run, "quotients"):
        rep = run.section(Report("quotient-theorem"))
        for c in cons:
            q = cg.verify_quotient_theorem(s, c)
            bad = q.failures()
            rep.add(f"congruence {c.describe(s.labels)}", not bad,
                    [(b.name, b.witness) for b in bad] or None)
    if sig == POSET:
        # open question: is the equivalence join of two such congruences again one?
        j = cg.poset_join_closure(s)
        run.record("open-question", "poset-congruences-join-closed", "yes" if j.ok else "no")
        if s.is_lattice():
            other = cg.enumerate_congruences(s, LATTICE)
            same = {c.block_of for c in other} == {c.block_of for c in cons}
            run.record("open-question", "signatures-coincide", "yes" if same else "no")
    _plot(run, args, s.poset, f"{_stem(args.file)}-hasse", _stem(args.file))


def _kernel_labels(s, raw: str):
    names = [x for x in (t.strip() for t in raw.split(",")) if x]
    unknown = [x for x in names if x not in s.poset.labels]
    if unknown:
        raise _Exit(EXIT_CHECK, f"unknown kernel label(s): {','.join(unknown)}")
    return [s.poset.index(x) for x in names]


def cmd_quotient(args, run: RunReport):
    doc = _load(args.file)
    run.labels = list(doc.poset.labels)
    s = _structure(doc, run)
    if s is None:
        return
    _summary(s, run)
    if not _has_top(s, run):
        return
    sig = _sig(args, s)
    run.summary["sig"] = sig
    m = _kernel_labels(s, args.kernel)
    f = fl.generated_filter(s, m, sig)
    theta = cg.principal_congruence(s, m, sig)
    run.record("generated-filter", fl.filter_label(s, f, sig), _set(s, f))
    run.record("congruence", theta.describe(s.labels))
    rep = run.section(Report("principal"))
    phi = cg.Congruence.from_relation(cg.phi_of(s, f), sig)
    rep.add("principal=phi(generated filter)", phi == theta, None if phi == theta else [phi.blocks])
    rep.add("kernel=generated filter", cg.kernel(s, theta) == f)
    q = cg.quotient(s, theta)
    run.section(cg.verify_quotient_theorem(s, theta))
    qp = q.order
    run.record("quotient", f"n={qp.n}", "elements=" + ",".join(qp.labels))
    for x, y in qp.hasse_covers():
        run.record("quotient-cover", qp.labels[x], qp.labels[y])
    n5 = parse_poset(fixture_text("n5"))
    run.record("isomorphic-to-N5", "yes" if find_isomorphism(qp, n5) is not None else "no")
    try:
        own = compute_star(qp).star
    except NotSectionallyPseudocomplemented:
        own = None
    matches = own == q.block_star
    run.record("block-star-equals-order-star", "yes" if matches else "no")
    text = write_poset(qp, q.block_star if matches else None)
    dot = to_dot(qp, "quotient")
    if args.output_dir:
        out = Path(args.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = f"{_stem(args.file)}-quotient"
        (out / f"{stem}.poset").write_text(text, encoding="utf-8")
        (out / f"{stem}.dot").write_text(dot, encoding="utf-8")
        run.record("wrote", out / f"{stem}.poset")
        run.record("wrote", out / f"{stem}.dot")
    else:
        run.attachments += [("quotient.poset", text), ("quotient.dot", dot)]
    _plot(run, args, s.poset, f"{_stem(args.file)}-hasse", _stem(args.file), highlight=f)
    _plot(run, args, qp, f"{_stem(args.file)}-quotient", "quotient")


def cmd_generate(args):
    cfg = GeneratorConfig(args.seed, args.n, args.density, args.require, args.max_tries)
    try:
        p = generate(cfg)
    except GiveUp as exc:
        raise _Exit(EXIT_CHECK, str(exc)) from None
    header = (
        f"# generated: seed={cfg.seed} n={cfg.n} density={cfg.density} require={cfg.require}\n"
    )
    return header + write_poset(p)


def cmd_export(args):
    doc = _load(args.file)
    p = doc.poset
    if args.format == "dot":
        return to_dot(p, _stem(args.file))
    include = {x for x in (args.include or "").split(",") if x}
    bad = include - {"star", "filters", "congruences"}
    if bad:
        raise _Exit(EXIT_CHECK, f"unknown --include item(s): {','.join(sorted(bad))}")
    star = filters = cons = None
    if include:
        try:
            s = compute_star(p)
        except NotSectionallyPseudocomplemented as exc:
            a, b = exc.pair
            raise _Exit(EXIT_CHECK, f"not sectionally pseudocomplemented: witness=({p.labels[a]},{p.labels[b]})") from None
        star = s.star if "star" in include else None
        if "filters" in include:
            filters = fl.enumerate_filters(s)
        if "congruences" in include:
            cons = [c.blocks for c in cg.enumerate_congruences(s)]
    return to_json(p, star, filters, cons)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="spc", description="Sectionally pseudocomplemented lattices and posets."
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def reporting(p):
        p.add_argument("file", help="poset file (.poset text or .json)")
        p.add_argument("--json", action="store_true", help="emit the report as JSON")
        p.add_argument("--plot-dir", help="write Hasse diagram PNGs here")
        p.add_argument("--timings", action="store_true", help="append per-stage timings")

    p = sub.add_parser("check", help="derive * and verify the basic identities")
    reporting(p)

    for name, helptext in (("filters", "enumerate filters"), ("congruences", "enumerate congruences")):
        p = sub.add_parser(name, help=helptext)
        reporting(p)
        p.add_argument("--sig", choices=(LATTICE, POSET), help="default: lattice if the order is one")
        if name == "filters":
            p.add_argument("--exhaustive", action="store_true", help="scan all 2^n subsets")
            p.add_argument("--literal", action="store_true",
                           help="drop the transitivity clause (translation conditions only)")

    p = sub.add_parser("quotient", help="quotient by the congruence of a generated filter")
    reporting(p)
    p.add_argument("--kernel", required=True, help="comma-separated labels, e.g. d,e")
    p.add_argument("--sig", choices=(LATTICE, POSET))
    p.add_argument("--output-dir", help="write the quotient .poset and .dot files here")

    p = sub.add_parser("generate", help="random poset from a seed")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--density", type=float, default=0.4)
    p.add_argument("--require", choices=REQUIRE, default="any")
    p.add_argument("--max-tries", type=int, default=20000)
    p.add_argument("-o", "--output", help="write here instead of stdout")

    p = sub.add_parser("export", help="DOT or JSON rendering of a poset file")
    p.add_argument("file")
    p.add_argument("--format", choices=("dot", "json"), required=True)
    p.add_argument("--include", help="json only: comma list of star,filters,congruences")
    p.add_argument("-o", "--output", help="write here instead of stdout")
    return ap


REPORTING = {
    "check": cmd_check,
    "filters": cmd_filters,
    "congruences": cmd_congruences,
    "quotient": cmd_quotient,
}


def _emit(text: str, output=None):
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in REPORTING:
            run = RunReport(args.command, str(args.file))
            REPORTING[args.command](args, run)
            if args.json:
                _emit(json.dumps(run.to_dict(args.timings), indent=2) + "\n")
            else:
                _emit(run.render_text(args.timings))
            return EXIT_OK if run.ok else EXIT_CHECK
        if args.command == "generate":
            _emit(cmd_generate(args), args.output)
        else:
            _emit(cmd_export(args), args.output)
        return EXIT_OK
    except _Exit as exc:
        print(f"spc: {exc}", file=sys.stderr)
        return exc.code
    except SizeGuardError as exc:
        print(f"spc: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ValueError, SpcError) as exc:
        print(f"spc: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
