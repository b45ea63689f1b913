"""Command-line interface: config parsing, dispatch, deterministic reports.

Exit codes: 0 ok, 1 disagreement (a failed check or a cell with
agree=false), 2 truncation overflow, 3 configuration error, 4 internal
error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import gcm as gcm_mod
from .engine import GroupWordSyntaxError, parse_group_word, plan_and_apply
from .gcm import AxiomViolation, CartanMatrix, Decomposable, NotSymmetrizable
from .hwmodule import (LambdaData, ModuleTruncation, TruncationOverflow,
                       height)
from .integrality import (ExperimentConfig, PairNotCommuting,
                          PreconditionFailed, base_case_experiment,
                          check_commutator_identity, check_hwtstab, check_Lxx,
                          inversion_experiment, pairing_along, rank2_omega,
                          scan)
from .oracle import RootMultTable
from .rootsys import (NotReduced, inversion_set, is_reduced,
                      real_roots_up_to_height, reduced_words)
from .util import fmt_rat, parse_rat

EXIT_OK = 0
EXIT_DISAGREE = 1
EXIT_OVERFLOW = 2
EXIT_CONFIG = 3
EXIT_INTERNAL = 4


class ParseError(ValueError):
    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{where}")


_KNOWN_KEYS = {"gcm", "gcm_file", "lambda", "depth", "height", "word",
               "params", "group_word", "t", "root", "max_len", "grid",
               "format", "out", "deterministic", "side", "count",
               "depth_margin", "k_max", "region_depth"}


def parse_config(text: str) -> dict:
    """key = value lines; '#' starts a comment; unknown keys are rejected."""
    cfg: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KNOWN_KEYS:
            raise ParseError(f"unknown key {key!r}", lineno, key)
        cfg[key] = value
    return cfg


def parse_gcm_text(text: str) -> CartanMatrix:
    """First token is the rank, followed by the rank x rank integer entries."""
    toks = text.split()
    if not toks:
        raise ParseError("empty GCM")
    try:
        n = int(toks[0])
        entries = [int(t) for t in toks[1:]]
    except ValueError as exc:
        raise ParseError(f"non-integer GCM entry: {exc}") from None
    if len(entries) != n * n:
        raise ParseError(f"expected {n * n} entries for rank {n}, "
                         f"got {len(entries)}")
    rows = [entries[r * n:(r + 1) * n] for r in range(n)]
    return gcm_mod.validate_gcm(rows)


def _load_gcm(cfg: dict) -> CartanMatrix:
    if "gcm_file" in cfg:
        with open(cfg["gcm_file"]) as fh:
            return parse_gcm_text(fh.read())
    if "gcm" in cfg:
        return parse_gcm_text(cfg["gcm"].replace(";", " "))
    raise ParseError("a GCM is required (key 'gcm' or 'gcm_file')")


def _load_lambda(cfg: dict, cm: CartanMatrix) -> LambdaData:
    if "lambda" not in cfg:
        raise ParseError("key 'lambda' is required")
    n = tuple(int(t) for t in cfg["lambda"].split())
    if len(n) != cm.size:
        raise ParseError(f"lambda has {len(n)} entries, rank is {cm.size}")
    return LambdaData(n)


def _word_from(cfg: dict, key: str = "word"):
    return tuple(int(t) - 1 for t in cfg.get(key, "").split())


def _params_from(cfg: dict, key: str = "params"):
    return tuple(parse_rat(t) for t in cfg.get(key, "").split())


def _root_list(beta) -> list:
    return [int(b) for b in beta]


def _word_out(word) -> list:
    return [i + 1 for i in word]


def _emit(report: dict, cfg: dict) -> None:
    out = cfg.get("out")
    fmt = cfg.get("format", "json")
    if fmt == "json":
        payload = json.dumps(report, indent=2, sort_keys=False) + "\n"
    elif fmt == "csv":
        payload = _to_csv(report)
    else:
        raise ParseError(f"unknown format {fmt!r}")
    if out:
        with open(out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _to_csv(report: dict) -> str:
    rows = report.get("cells") or report.get("rows")
    if rows is None:
        rows = [report]
    buf = io.StringIO()
    keys = sorted({k for r in rows for k in r})
    writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: _csv_cell(r.get(k)) for k in keys})
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(v, sort_keys=False)
    return v


def _deterministic(cfg: dict) -> bool:
    return cfg.get("deterministic", "false").lower() in ("true", "1", "yes")


def _report_of(rep, cfg: dict, extra: dict) -> dict:
    out = dict(extra)
    out.update(member=rep.member, expected=rep.expected, agree=rep.agree,
               certificate=_cert_out(rep.certificate),
               depth_used=rep.depth_used,
               ms=0 if _deterministic(cfg) else rep.ms)
    return out


def _cert_out(cert) -> dict:
    out = {}
    for beta, val in sorted(cert.items(), key=lambda kv: (height(kv[0]), kv[0])):
        key = " ".join(str(b) for b in beta)
        if isinstance(val, dict):
            out[key] = {"non_integral_index": val["non_integral_index"],
                        "value": fmt_rat(val["value"])}
        else:
            out[key] = val
    return out


# -- commands ------------------------------------------------------------------


def cmd_classify(cfg: dict) -> int:
    cm = _load_gcm(cfg)
    comps = gcm_mod.classify_components(cm)
    report = {"rank": cm.size,
              "symmetrizer": [int(q) for q in cm.symmetrizer],
              "components": [
                  {"indices": [i + 1 for i in idx],
                   "kind": mt.kind,
                   "hyperbolic": mt.hyperbolic}
                  for idx, mt in comps]}
    _emit(report, cfg)
    return EXIT_OK


def cmd_roots(cfg: dict) -> int:
    cm = _load_gcm(cfg)
    h = int(cfg.get("height", "3"))
    table = real_roots_up_to_height(cm, h)
    rows = [{"root": _root_list(beta), "height": height(beta),
             "witness_word": _word_out(w), "witness_index": i + 1}
            for beta, (w, i) in sorted(table.items(),
                                       key=lambda kv: (height(kv[0]), kv[0]))]
    _emit({"height": h, "real_roots": rows}, cfg)
    return EXIT_OK


def cmd_word(cfg: dict) -> int:
    cm = _load_gcm(cfg)
    word = _word_from(cfg)
    red = is_reduced(cm, word)
    report = {"word": _word_out(word), "reduced": red}
    if red:
        inv = inversion_set(cm, word)
        report["inversion_set"] = [
            {"root": _root_list(e.root), "prefix": _word_out(e.prefix),
             "letter": e.letter + 1}
            for e in inv.entries]
    _emit(report, cfg)
    return EXIT_OK


def cmd_module(cfg: dict) -> int:
    cm = _load_gcm(cfg)
    lam = _load_lambda(cfg, cm)
    depth = int(cfg.get("depth", "3"))
    trunc = ModuleTruncation(cm, lam)
    trunc.materialize_box(depth)
    spaces = []
    for beta in sorted(trunc.spaces, key=lambda b: (height(b), b)):
        sp = trunc.space(beta)
        entry = {"depth": _root_list(beta), "dim": sp.dim,
                 "oracle_mult": trunc.oracle.weight_mult(beta)}
        if sp.dim:
            entry["basis_words"] = [_word_out(w) for w in sp.words]
            entry["gram"] = [[fmt_rat(x) for x in row] for row in sp.gram]
            lat = trunc.lattice(beta)
            entry["lattice_hnf"] = [[fmt_rat(x) for x in col]
                                    for col in lat.basis_columns()]
        spaces.append(entry)
    _emit({"lambda": list(lam.n), "depth": depth, "weight_spaces": spaces},
          cfg)
    return EXIT_OK


def cmd_apply(cfg: dict) -> int:
    cm = _load_gcm(cfg)
    lam = _load_lambda(cfg, cm)
    g = parse_group_word(cm, cfg.get("group_word", ""))
    trunc = ModuleTruncation(cm, lam)
    out = plan_and_apply(trunc, g, trunc.highest_weight_vector())
    member, cert = trunc.membership_VZ(out)
    report = {"group_word": cfg.get("group_word", ""),
              "vector": {" ".join(str(b) for b in beta):
                         [fmt_rat(x) for x in xs]
                         for beta, xs in sorted(out.items(),
                                                key=lambda kv: (height(kv[0]),
                                                                kv[0]))},
              "in_integral_form": member,
              "certificate": _cert_out(cert)}
    _emit(report, cfg)
    return EXIT_OK


def cmd_check(cfg: dict) -> int:
    cm = _load_gcm(cfg)
    lam = _load_lambda(cfg, cm)
    trunc = ModuleTruncation(cm, lam)
    k_max = int(cfg.get("k_max", "3"))
    rdepth = int(cfg.get("region_depth", "2"))
    region = [b for b in _box(cm.size, rdepth)]
    results = {}
    for i in range(cm.size):
        for k in range(1, k_max + 1):
            results[f"commutator_i{i + 1}_k{k}"] = \
                check_commutator_identity(trunc, i, k, region)
    roots = real_roots_up_to_height(cm, 3)
    trunc.materialize_box(rdepth)
    # mu stays inside the configured box (check_Lxx materializes deeper
    # spaces as a side effect) and n is capped: large pairings route the
    # divided-power extraction through very deep weight spaces
    mus = sorted(_box(cm.size, rdepth), key=lambda b: (height(b), b))
    for beta, wit in sorted(roots.items()):
        for mu in mus:
            if trunc.space(mu).dim == 0:
                continue
            if not 1 <= pairing_along(trunc, mu, wit) <= 4:
                continue
            try:
                ok = check_Lxx(trunc, wit, mu)
            except PreconditionFailed:
                continue
            results[f"Lxx_root_{beta}_mu_{mu}"] = ok
    if cfg.get("group_word"):
        g = parse_group_word(cm, cfg["group_word"])
        results["hwtstab"] = check_hwtstab(trunc, g)
    if "side" in cfg:
        side = int(cfg["side"])
        count = int(cfg.get("count", "6"))
        om = rank2_omega(cm, side, count)
        word: list[int] = []
        letter = side - 1
        ok = True
        for k in range(1, count + 1):
            word.append(letter)
            letter = 1 - letter
            if inversion_set(cm, tuple(word)).roots() != om[:k]:
                ok = False
        results[f"omega_prefixes_side{side}"] = ok
    ok = all(results.values())
    _emit({"all_pass": ok,
           "checks": {k: v for k, v in sorted(results.items())}}, cfg)
    return EXIT_OK if ok else EXIT_DISAGREE


def cmd_integrality(cfg: dict) -> int:
    cm = _load_gcm(cfg)
    lam = _load_lambda(cfg, cm)
    trunc = ModuleTruncation(cm, lam)
    word = _word_from(cfg)
    if word:
        params = _params_from(cfg)
        ec = ExperimentConfig(cm, lam, word, params,
                              int(cfg.get("depth_margin", "2")))
        rep = inversion_experiment(trunc, ec)
        extra = {"experiment": "inversion", "word": _word_out(word),
                 "params": [fmt_rat(t) for t in params]}
    elif "root" in cfg:
        beta = tuple(int(t) for t in cfg["root"].split())
        table = real_roots_up_to_height(cm, height(beta))
        if beta not in table:
            raise ParseError(f"{beta} is not a positive real root of "
                             f"height <= {height(beta)}")
        t = parse_rat(cfg.get("t", "1"))
        rep = base_case_experiment(trunc, table[beta], t)
        extra = {"experiment": "base_case", "root": _root_list(beta),
                 "witness_word": _word_out(table[beta][0]),
                 "witness_index": table[beta][1] + 1, "t": fmt_rat(t)}
    else:
        raise ParseError("integrality needs 'word'+'params' or 'root'+'t'")
    _emit(_report_of(rep, cfg, extra), cfg)
    return EXIT_OK if rep.agree else EXIT_DISAGREE


def cmd_scan(cfg: dict) -> int:
    cm = _load_gcm(cfg)
    lam = _load_lambda(cfg, cm)
    max_len = int(cfg.get("max_len", "2"))
    grid = [parse_rat(t) for t in cfg.get(
        "grid", "-2 -1 1 2 1/2 -1/3 2/3").split()]
    words = reduced_words(cm, max_len)
    words = [w for w in words if w]
    tuples = []
    for w in words:
        tuples.extend(_grid_tuples(grid, len(w)))
    cells = scan(cm, lam, words,
                 sorted(set(tuples), key=lambda tp: (len(tp), tp)),
                 int(cfg.get("depth_margin", "2")))
    det = _deterministic(cfg)
    rows = []
    for c in sorted(cells, key=lambda c: (len(c["word"]), c["word"],
                                          c["params"])):
        rows.append({"word": _word_out(c["word"]),
                     "params": [fmt_rat(t) for t in c["params"]],
                     "status": c["status"], "member": c["member"],
                     "expected": c["expected"], "agree": c["agree"],
                     "depth_used": c["depth_used"],
                     "ms": 0 if det else c["ms"]})
    n_dis = sum(1 for r in rows if r["agree"] is False)
    n_over = sum(1 for r in rows if r["status"] == "overflow")
    report = {"cells": rows, "n_cells": len(rows),
              "n_disagree": n_dis, "n_overflow": n_over}
    _emit(report, cfg)
    if n_dis:
        return EXIT_DISAGREE
    if n_over:
        return EXIT_OVERFLOW
    return EXIT_OK


def cmd_oracle_mults(cfg: dict) -> int:
    cm = _load_gcm(cfg)
    h = int(cfg.get("height", "4"))
    table = RootMultTable(cm, h)
    rows = [{"root": _root_list(b), "mult": table.mult(b)}
            for b in table.positive_roots()]
    report = {"height": h, "root_mults": rows}
    if "lambda" in cfg:
        lam = _load_lambda(cfg, cm)
        from .oracle import Oracle
        orc = Oracle(cm, lam.n)
        depth = int(cfg.get("depth", str(h)))
        wrows = []
        for beta in _box(cm.size, depth):
            m = orc.weight_mult(beta)
            if m:
                wrows.append({"depth": _root_list(beta), "mult": m})
        report["weight_mults"] = wrows
    _emit(report, cfg)
    return EXIT_OK


def _box(rank: int, depth: int):
    from .oracle import _vectors_of_height
    for h in range(depth + 1):
        yield from sorted(_vectors_of_height(rank, h))


def _grid_tuples(grid, k: int):
    import itertools
    return list(itertools.product(grid, repeat=k))


_COMMANDS = {"classify": cmd_classify, "roots": cmd_roots, "word": cmd_word,
             "module": cmd_module, "apply": cmd_apply, "check": cmd_check,
             "integrality": cmd_integrality, "scan": cmd_scan,
             "oracle-mults": cmd_oracle_mults}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="kmint",
        description="Exact integrality experiments for Kac-Moody "
                    "highest-weight modules")
    ap.add_argument("command", choices=sorted(_COMMANDS))
    ap.add_argument("--config", help="key=value config file")
    ap.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                    help="override a single config key")
    args = ap.parse_args(argv)
    try:
        cfg = {}
        if args.config:
            with open(args.config) as fh:
                cfg = parse_config(fh.read())
        for item in args.set:
            if "=" not in item:
                raise ParseError(f"--set expects KEY=VALUE, got {item!r}")
            key, _, value = item.partition("=")
            if key.strip() not in _KNOWN_KEYS:
                raise ParseError(f"unknown key {key.strip()!r}")
            cfg[key.strip()] = value.strip()
        return _COMMANDS[args.command](cfg)
    except (ParseError, AxiomViolation, NotSymmetrizable, Decomposable,
            NotReduced, GroupWordSyntaxError, PreconditionFailed,
            PairNotCommuting, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TruncationOverflow as exc:
        print(f"overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
