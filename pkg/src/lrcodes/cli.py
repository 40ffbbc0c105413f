"""Command-line front end: ``lrcodes <command> [options]``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Any, Sequence

from . import __version__
from .code import (
    LRCode,
    QuditLRCode,
    build_code,
    build_qudit_code,
    check_commutation,
    check_parity_identity,
    degeneracy,
    qudit_degeneracy,
)
from .errors import LRCodesError, SpecError
from .groups import FiniteGroup, make_group, subset
from .io import (
    COMMANDS,
    FORMATS,
    ResultEnvelope,
    RunConfig,
    emit,
    load_code_config,
    load_tower_config,
    parse_error_text,
    parse_kernel_text,
    split_labels,
    write_output,
)
from .quotients import make_family
from .spectrum import apply_error, min_excitation_energy, spectrum
from .tower import SCAN_COLUMNS, ScanOptions, TowerSpec, project_subsets, tower_scan, verify_chain

log = logging.getLogger("lrcodes")

SPECTRUM_COLUMNS = ["energy", "syndrome_count", "log2_eigenspace_dim", "eigenspace_dim"]
_FAMILY_PREFIXES = ("Z", "Dinf", "D_inf", "finite:")


# -- building codes from a config ---------------------------------------------------


def _is_family(spec: str) -> bool:
    return spec.startswith(_FAMILY_PREFIXES)


def group_name(config: RunConfig) -> str:
    """Display name: the group spec, or ``family/kernel`` for a quotient."""
    spec = str(config.group)
    if _is_family(spec) and config.kernel is not None:
        fam = make_family(spec)
        return f"{fam.spec}/{fam.kernel_label(fam.parse_kernel(config.kernel))}"
    return spec


def _resolve_group(config: RunConfig, warnings: list[str]) -> tuple[FiniteGroup, list, list, dict | None]:
    """Group, S1 and S2 as element indices, and the qudit exponents keyed by index."""
    spec = str(config.group)
    if _is_family(spec):
        if config.kernel is None:
            raise SpecError(f"group family {spec} needs a kernel (--kernel)")
        proj = project_subsets(spec, config.s1, config.s2, config.kernel)
        warnings.extend(proj.warnings)
        G = proj.group
        fam = proj.qmap.source
        to_index = lambda label: proj.qmap(fam.parse_element(label))  # noqa: E731
        S1, S2 = list(proj.S1.members), list(proj.S2.members)
    else:
        if config.kernel is not None:
            raise SpecError("--kernel only applies to group families (Z, Z^2, Z^3, Dinf, finite:...)")
        G = make_group(spec, max_order=config.max_order)
        to_index = G.parse
        S1 = list(subset(G, config.s1).members)
        S2 = list(subset(G, config.s2).members)
        for name, raw, S in (("S1", config.s1, S1), ("S2", config.s2, S2)):
            if len(S) < len(raw):
                warnings.append(f"{name} lists repeated elements")
    exps = None
    if config.qudit is not None:
        d = int(config.qudit["d"])
        exps = {"d": d}
        for key, raw in (("m1", config.s1), ("m2", config.s2)):
            m = config.qudit.get(key)
            if m is None:
                m = [1] * len(raw)
            if isinstance(m, (list, tuple)):
                if len(m) != len(raw):
                    raise SpecError(f"{key} needs one exponent per element")
                m = dict(zip(raw, m))
            out: dict[int, int] = {}
            for label, e in m.items():
                g = to_index(label)
                out[g] = (out.get(g, 0) + int(e)) % d
            exps[key] = out
    return G, S1, S2, exps


def build_from_config(config: RunConfig, warnings: list[str]) -> LRCode | QuditLRCode:
    G, S1, S2, exps = _resolve_group(config, warnings)
    A, B = subset(G, S1), subset(G, S2)
    if exps is not None:
        return build_qudit_code(G, A, B, exps["d"], exps["m1"], exps["m2"])
    return build_code(G, A, B)


def _require_qubit(code: Any, command: str) -> LRCode:
    if isinstance(code, QuditLRCode):
        raise SpecError(f"{command} supports qubit codes only")
    return code


# -- commands --------------------------------------------------------------------------


def _cmd_verify(config: RunConfig, warnings: list[str]) -> tuple[dict, list[str] | None]:
    code = build_from_config(config, warnings)
    payload: dict[str, Any] = {"group": group_name(config), "order": code.n, "commutation": check_commutation(code)}
    if isinstance(code, QuditLRCode):
        payload["d"] = code.d
        return payload, None
    weights = sorted(set(int(w) for w in code.stabilizers.row_weights()))
    payload["stabilizer_weights"] = weights
    if len(code.S1) % 2 == 0 and len(code.S2) % 2 == 0:
        payload["parity_identity"] = check_parity_identity(code)
    else:
        payload["parity_identity"] = None
    return payload, None


def _cmd_degeneracy(config: RunConfig, warnings: list[str]) -> tuple[dict, list[str] | None]:
    code = build_from_config(config, warnings)
    payload: dict[str, Any] = {"group": group_name(config), "order": code.n}
    if isinstance(code, QuditLRCode):
        logd = qudit_degeneracy(code)
        payload.update(d=code.d, rank=2 * code.n - logd, log_d_degeneracy=logd, degeneracy=f"{code.d}^{logd}")
        return payload, None
    rep = degeneracy(code)
    payload.update(rank=rep.rank_k, log2_degeneracy=rep.log2_degeneracy, degeneracy=rep.degeneracy_str)
    return payload, None


def _cmd_spectrum(config: RunConfig, warnings: list[str]) -> tuple[dict, list[str] | None]:
    code = _require_qubit(build_from_config(config, warnings), "spectrum")
    table = spectrum(code, mode=config.mode, max_energy=config.max_energy, cap=config.enum_cap)
    payload = {
        "group": group_name(config),
        "order": code.n,
        "rank": table.rank_k,
        "mode": config.mode,
        "exact": table.exact,
        "max_energy": table.max_energy,
        "rows": table.as_rows(),
    }
    if not table.exact:
        warnings.append(f"truncated spectrum: energies above {table.max_energy} not listed")
    return payload, SPECTRUM_COLUMNS


def _cmd_min_excitation(config: RunConfig, warnings: list[str]) -> tuple[dict, list[str] | None]:
    code = _require_qubit(build_from_config(config, warnings), "min-excitation")
    ex = min_excitation_energy(code, strategy=config.strategy, cap=config.enum_cap, max_radius=config.radius)
    if not ex.exact:
        warnings.append("minimal energy is an upper bound only")
    payload = {
        "group": group_name(config),
        "order": code.n,
        "energy": ex.energy,
        "exact": ex.exact,
        "strategy": ex.strategy,
        "witness": [":".join(t) for t in ex.witness] if ex.witness else None,
        "notes": list(ex.notes),
    }
    return payload, None


def _cmd_apply_error(config: RunConfig, warnings: list[str]) -> tuple[dict, list[str] | None]:
    code = _require_qubit(build_from_config(config, warnings), "apply-error")
    effect = apply_error(code, config.errors)
    payload = {
        "group": group_name(config),
        "order": code.n,
        "error": [":".join(map(str, t)) for t in config.errors],
        "energy": effect.energy,
        "violated": effect.violated,
    }
    return payload, None


def _cmd_scan(config: RunConfig, warnings: list[str]) -> tuple[dict, list[str] | None]:
    tw = config.tower
    family = make_family(str(tw["family"]))
    mode = tw.get("mode", "explicit")
    spec = TowerSpec.build(family, mode=mode, nodes=tw.get("nodes") or [], max_index=tw.get("max_index"))
    opts = tw.get("options") or {}
    options = ScanOptions(
        min_excitation=bool(opts.get("min_excitation", False)),
        threads=config.threads,
        cache_dir=config.cache_dir,
        timing=config.timing,
        qudit=opts.get("qudit"),
        enum_cap=config.enum_cap,
    )
    rows = tower_scan(spec, tw["s1"], tw["s2"], options) if spec.nodes else []
    payload: dict[str, Any] = {"family": family.spec, "mode": mode, "rows": [r.as_dict() for r in rows]}
    if mode == "chain":
        report = verify_chain(spec)
        payload["chain_indices"] = report.indices
        payload["index_increasing"] = report.index_increasing
    for r in rows:
        if r.error:
            warnings.append(f"{r.kernel}: {r.error}")
        warnings.extend(f"{r.kernel}: {w}" for w in r.warnings)
    return payload, SCAN_COLUMNS


_DISPATCH = {
    "verify": _cmd_verify,
    "degeneracy": _cmd_degeneracy,
    "spectrum": _cmd_spectrum,
    "min-excitation": _cmd_min_excitation,
    "apply-error": _cmd_apply_error,
    "scan": _cmd_scan,
}


def run(config: RunConfig) -> ResultEnvelope:
    config.validate()
    warnings: list[str] = []
    payload, columns = _DISPATCH[config.command](config, warnings)
    return ResultEnvelope(config.command, config.digest(), __version__, payload, warnings, columns)


# -- argument parsing ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lrcodes", description="LR stabilizer codes on finite groups.")
    parser.add_argument("--version", action="version", version=f"lrcodes {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=FORMATS, default="text")
    common.add_argument("--output", "-o", help="write results here instead of stdout")
    common.add_argument("--max-order", type=int, default=4096, help="cap on multiplication-table group order")
    common.add_argument("--enum-cap", type=int, default=24, help="exact enumeration cap, log2 of codeword count")
    common.add_argument("-v", "--verbose", action="store_true")

    code = argparse.ArgumentParser(add_help=False)
    code.add_argument("--group", help="cyclic:n, abelian:n1,n2,..., dihedral:n, table:path, or a family with --kernel")
    code.add_argument("--kernel", help="kernel for a group family: 4, 2,2,2 or 2,0;1,2")
    code.add_argument("--s1", help="comma-separated element labels")
    code.add_argument("--s2", help="comma-separated element labels")
    code.add_argument("--config", help="YAML code config; its values override inline flags")
    code.add_argument("--qudit-d", type=int, help="prime qudit dimension")
    code.add_argument("--m1", help="comma-separated exponents for S1")
    code.add_argument("--m2", help="comma-separated exponents for S2")

    sub.add_parser("verify", parents=[common, code], help="check commutation and parity identities")
    sub.add_parser("degeneracy", parents=[common, code], help="ground-state degeneracy from the GF(2) rank")
    sp = sub.add_parser("spectrum", parents=[common, code], help="eigenspace dimensions by energy")
    sp.add_argument("--mode", choices=("exact", "truncated"), default="exact")
    sp.add_argument("--max-energy", type=int)
    mp = sub.add_parser("min-excitation", parents=[common, code], help="minimal excitation energy")
    mp.add_argument("--strategy", choices=("syndrome-enum", "error-bfs"), default="syndrome-enum")
    mp.add_argument("--radius", type=int, default=6, help="error-bfs search radius")
    ap = sub.add_parser("apply-error", parents=[common, code], help="syndrome and energy of a Pauli error")
    ap.add_argument("--error", action="append", default=[], help="label:layer:P, repeatable")
    sc = sub.add_parser("scan", parents=[common], help="scan invariants along a tower of quotients")
    sc.add_argument("--tower", required=True, help="YAML tower config")
    sc.add_argument("--threads", type=int, default=1)
    sc.add_argument("--cache-dir", default=os.environ.get("LRCODES_CACHE_DIR"))
    sc.add_argument("--timing", action="store_true", help="fill the seconds column with wall times")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        command=args.command,
        fmt=args.fmt,
        output=args.output,
        max_order=args.max_order,
        enum_cap=args.enum_cap,
    )
    if args.command == "scan":
        cfg.tower_path = args.tower
        cfg.tower = load_tower_config(args.tower)
        cfg.threads = args.threads
        cfg.cache_dir = args.cache_dir
        cfg.timing = args.timing
        return cfg
    cfg.group = args.group
    cfg.kernel = parse_kernel_text(args.kernel) if args.kernel else None
    cfg.s1 = split_labels(args.s1) if args.s1 else None
    cfg.s2 = split_labels(args.s2) if args.s2 else None
    if args.qudit_d is not None:
        cfg.qudit = {"d": args.qudit_d}
        for key in ("m1", "m2"):
            val = getattr(args, key)
            if val:
                try:
                    cfg.qudit[key] = [int(v) for v in val.split(",")]
                except ValueError:
                    raise SpecError(f"--{key} must be comma-separated integers") from None
    if args.command == "spectrum":
        cfg.mode, cfg.max_energy = args.mode, args.max_energy
    elif args.command == "min-excitation":
        cfg.strategy, cfg.radius = args.strategy, args.radius
    elif args.command == "apply-error":
        cfg.errors = [parse_error_text(e) for e in args.error]
    if args.config:
        cfg.config_path = args.config
        _merge_code_file(cfg, load_code_config(args.config))
    return cfg


def _merge_code_file(cfg: RunConfig, data: dict) -> None:
    """File values win over inline flags; each override is logged as a warning."""
    mapping = {"group": "group", "family": "group", "kernel": "kernel", "s1": "s1", "s2": "s2", "qudit": "qudit"}
    for key, attr in mapping.items():
        if key not in data:
            continue
        value = data[key]
        if key == "group" or key == "family":
            value = str(value)
        current = getattr(cfg, attr)
        if current is not None and current != value:
            log.warning("config file overrides --%s", attr.replace("_", "-"))
        setattr(cfg, attr, value)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="lrcodes: %(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = config_from_args(args)
        envelope = run(config)
        for w in envelope.warnings:
            log.info(w)
        write_output(emit(envelope, config.fmt), config.output, sys.stdout)
    except LRCodesError as exc:
        print(f"lrcodes: error[{exc.kind}]: {_one_line(exc)}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # pragma: no cover - reported as an internal fault
        print(f"lrcodes: error[internal]: {type(exc).__name__}: {_one_line(exc)}", file=sys.stderr)
        return 4
    return 0


def _one_line(exc: BaseException) -> str:
    return " ".join(str(exc).split())


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
