"""Command-line front end.

Subcommands: group, marks, decompose, pattern, verify, fit.  Machine
output (JSON) goes to stdout or --out; human-readable diagnostics go to
stderr.  Runs are reproducible: identical flags give byte-identical JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import burnside as bn
from . import gsets
from .actions import GroupAction, action_properties, coset_space, orbits
from .errors import (
    EqvError,
    LatticeCapExceeded,
    OrderCapExceeded,
    SizeCapExceeded,
    TargetNotEquivariant,
    UnfaithfulAction,
)
from .eqmlp import TrainConfig, build_regular_net, make_target, train
from .groups import (
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    alternating,
    closure,
    cyclic,
    dihedral,
    symmetric,
)
from .lattice import DEFAULT_LATTICE_CAP, subgroup_lattice
from .perm import is_perm
from .sharing import equivariance_report, kernel_form, make_pattern

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_INPUT = 2
EXIT_ORDER_CAP = 3
EXIT_EXPLICIT_CAP = 4
EXIT_UNFAITHFUL = 5

BUILTIN_FAMILIES = {
    "cyclic": cyclic,
    "dihedral": dihedral,
    "symmetric": symmetric,
    "alternating": alternating,
}


class CliInputError(Exception):
    pass


def _dump_json(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise CliInputError(f"environment variable {name} must be an integer")


def _build_builtin(token: str, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    family, _, arg = token.partition(":")
    if family not in BUILTIN_FAMILIES or not arg:
        raise CliInputError(
            f"unknown builtin {token!r}; use "
            "cyclic:n | dihedral:n | symmetric:n | alternating:n"
        )
    try:
        n = int(arg)
    except ValueError:
        raise CliInputError(f"builtin parameter in {token!r} must be an integer")
    try:
        return BUILTIN_FAMILIES[family](n, order_cap=order_cap)
    except ValueError as exc:
        raise CliInputError(str(exc))


def load_group_spec(path: str, order_cap: int) -> FiniteGroup:
    """Read the group-spec JSON: {"name"?, "degree", "generators"}."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise CliInputError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise CliInputError(f"{path} is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise CliInputError(f"{path}: top level must be an object")
    degree = data.get("degree")
    if not isinstance(degree, int) or degree < 1:
        raise CliInputError(f"{path}: field 'degree' must be a positive integer")
    raw_gens = data.get("generators")
    if not isinstance(raw_gens, list):
        raise CliInputError(f"{path}: field 'generators' must be a list")
    gens = []
    for k, g in enumerate(raw_gens):
        if (
            not isinstance(g, list)
            or len(g) != degree
            or not all(isinstance(v, int) for v in g)
            or not is_perm(tuple(g))
        ):
            raise CliInputError(
                f"{path}: field 'generators[{k}]' must be a permutation of "
                f"0..{degree - 1} as a list of {degree} integers"
            )
        gens.append(tuple(g))
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise CliInputError(f"{path}: field 'name' must be a string")
    return closure(degree, gens, order_cap=order_cap, name=name)


def _resolve_group(args) -> FiniteGroup:
    if getattr(args, "builtin", None):
        return _build_builtin(args.builtin, args.order_cap)
    if getattr(args, "spec", None):
        return load_group_spec(args.spec, args.order_cap)
    raise CliInputError("provide a spec file or --builtin")


def _group_token(token: str, order_cap: int) -> tuple[FiniteGroup, list]:
    """A positional group argument: spec path or builtin token."""
    family = token.partition(":")[0]
    if family in BUILTIN_FAMILIES:
        group = _build_builtin(token, order_cap)
    else:
        group = load_group_spec(token, order_cap)
    return group, list(group.generators)


def _paired_actions(
    token_in: str, token_out: str, order_cap: int
) -> tuple[GroupAction, GroupAction]:
    """Input/output actions of one group from two generator lists.

    Identical generator lists give the natural action twice; otherwise the
    two lists are paired generator-by-generator and the common group is the
    closure of the block-diagonal permutations.
    """
    group_in, gens_in = _group_token(token_in, order_cap)
    group_out, gens_out = _group_token(token_out, order_cap)
    if gens_in == gens_out and group_in.degree == group_out.degree:
        action = GroupAction.natural(group_in)
        return action, action
    if len(gens_in) != len(gens_out):
        raise CliInputError(
            "input and output specs must pair up generator-by-generator "
            f"(got {len(gens_in)} vs {len(gens_out)} generators)"
        )
    n_in, n_out = group_in.degree, group_out.degree
    combined_gens = [
        tuple(gin) + tuple(v + n_in for v in gout)
        for gin, gout in zip(gens_in, gens_out)
    ]
    combined = closure(n_in + n_out, combined_gens, order_cap=order_cap)
    in_action = GroupAction(
        combined, n_in, [tuple(e[:n_in]) for e in combined.elements]
    )
    out_action = GroupAction(
        combined, n_out, [tuple(v - n_in for v in e[n_in:]) for e in combined.elements]
    )
    return in_action, out_action


def _resolve_class(lattice, token: str) -> int:
    labels = lattice.labels()
    if token in labels:
        return labels.index(token)
    if token.startswith("o"):
        order_str = token[1:]
        if order_str.isdigit():
            matches = [
                i for i, c in enumerate(lattice.classes)
                if c.sub_order == int(order_str)
            ]
            if len(matches) == 1:
                return matches[0]
            raise CliInputError(
                f"class selector {token!r} matches {len(matches)} classes; "
                "use an index or full label"
            )
    try:
        idx = int(token)
    except ValueError:
        raise CliInputError(
            f"class selector {token!r} is not an index, label, or o<order>"
        )
    if not 0 <= idx < len(lattice.classes):
        raise CliInputError(
            f"class index {idx} outside 0..{len(lattice.classes) - 1}"
        )
    return idx


def cmd_group(args) -> int:
    group = _resolve_group(args)
    action = GroupAction.natural(group)
    props = action_properties(action)
    orbs = orbits(action)
    print(f"name: {group.name or '(unnamed)'}")
    print(f"order: {group.order}")
    print(f"degree: {group.degree}")
    print(f"generators: {len(group.generators)}")
    print(f"orbits: {len(orbs)}")
    summary = [
        f"order {group.order}",
        "transitive" if props.transitive else "not transitive",
        "faithful" if props.faithful else "not faithful",
        "regular" if props.regular else "not regular",
    ]
    print("summary: " + ", ".join(summary))
    return EXIT_OK


def _pretty_marks(table: bn.TableOfMarks) -> str:
    labels = table.lattice.labels()
    width = max(
        max((len(str(v)) for row in table.matrix for v in row), default=1),
        max(len(lab) for lab in labels),
    )
    lines = [" " * (width + 4) + " ".join(f"{lab:>{width}}" for lab in labels)]
    for i, row in enumerate(table.matrix):
        cells = [
            f"{row[j]:>{width}}" if j <= i else " " * width
            for j in range(len(row))
        ]
        lines.append(f"{labels[i]:>{width}} \\G " + " ".join(cells))
    return "\n".join(lines)


def cmd_marks(args) -> int:
    group = _resolve_group(args)
    lattice = subgroup_lattice(group, lattice_cap=args.lattice_cap)
    table = bn.table_of_marks(lattice)
    if len(lattice) <= 12:
        print(_pretty_marks(table), file=sys.stderr)
    _dump_json(table.to_json_dict(), args.out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    group = _resolve_group(args)
    lattice = subgroup_lattice(group, lattice_cap=args.lattice_cap)
    table = bn.table_of_marks(lattice)
    cls = _resolve_class(lattice, args.subgroup_class)
    if args.power < 1:
        raise CliInputError(f"--power must be >= 1, got {args.power}")
    expr = bn.indicator(table, cls)
    result = expr
    for _ in range(args.power - 1):
        result = bn.product(table, result, expr)
    if args.explicit:
        space = coset_space(group, lattice.classes[cls].representative)
        power_action = gsets.diagonal_power(space, args.power, cap=args.explicit_cap)
        explicit = gsets.orbit_decompose(power_action, lattice)
        if explicit != result:
            raise EqvError(
                "explicit orbit decomposition disagrees with mark arithmetic: "
                f"{explicit} vs {result}"
            )
    payload = {
        "class": lattice.label(cls),
        "power": args.power,
        "multiplicities": {
            lattice.label(i): m for i, m in enumerate(result) if m > 0
        },
        "regular_orbit": result[0] > 0,
    }
    if args.regular_order:
        report = bn.regular_orbit_order(table, cls)
        payload["minimal_D"] = report.minimal_D
        payload["log_bound"] = report.log_bound
        payload["stirling_bound"] = report.stirling_bound
    _dump_json(payload, args.out)
    return EXIT_OK


def cmd_pattern(args) -> int:
    in_action, out_action = _paired_actions(args.spec_in, args.spec_out, args.order_cap)
    pattern = make_pattern(out_action, in_action)
    payload = pattern.to_json_dict()
    if args.kernel:
        form = kernel_form(pattern, out_action, in_action)
        payload["kernel_slots"] = list(form.kernel_slots)
    _dump_json(payload, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        with open(args.matrix) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise CliInputError(f"cannot read {args.matrix}: {exc}")
    except json.JSONDecodeError as exc:
        raise CliInputError(f"{args.matrix} is not valid JSON: {exc}")
    if not isinstance(data, dict) or "matrix" not in data:
        raise CliInputError(f"{args.matrix}: field 'matrix' is required")
    in_action, out_action = _paired_actions(args.spec_in, args.spec_out, args.order_cap)
    matrix = np.asarray(data["matrix"], dtype=float)
    bias = None
    if data.get("bias") is not None:
        bias = np.asarray(data["bias"], dtype=float)
    passed, worst_gen, deviation = equivariance_report(
        matrix, bias, out_action, in_action, tol=args.tol
    )
    _dump_json(
        {
            "equivariant": passed,
            "max_deviation": deviation,
            "worst_generator": worst_gen,
        },
        args.out,
    )
    return EXIT_OK if passed else EXIT_VERIFY_FAIL


def cmd_fit(args) -> int:
    group = _resolve_group(args)
    in_action = GroupAction.natural(group)
    try:
        target = make_target(args.target, group, in_action)
    except ValueError as exc:
        raise CliInputError(str(exc))
    net = build_regular_net(
        group, in_action, target.out_action, args.channels, seed=args.seed
    )
    cfg = TrainConfig(
        seed=args.seed,
        lr=args.lr,
        epochs=args.epochs,
        batch_size=args.batch_size,
        momentum=args.momentum,
    )
    report = train(net, target, cfg)
    step = max(1, cfg.epochs // 20)
    print(f"{'epoch':>8} {'train mse':>14}", file=sys.stderr)
    for e in range(0, cfg.epochs, step):
        print(f"{e:>8} {report.loss_curve[e]:>14.6e}", file=sys.stderr)
    print(f"{'final':>8} {report.final_mse:>14.6e} (held out)", file=sys.stderr)
    _dump_json(
        {
            "config": {
                "target": args.target,
                "channels": args.channels,
                "epochs": cfg.epochs,
                "batch_size": cfg.batch_size,
                "lr": cfg.lr,
                "momentum": cfg.momentum,
                "seed": cfg.seed,
            },
            "final_mse": report.final_mse,
            "final_train_mse": report.final_train_mse,
            "curve": report.loss_curve,
        },
        args.out,
    )
    return EXIT_OK


def _add_group_source(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("spec", nargs="?", help="group spec JSON file")
    sub.add_argument(
        "--builtin",
        help="built-in group: cyclic:n | dihedral:n | symmetric:n | alternating:n",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eqv",
        description="Finite permutation groups, tables of marks, and "
        "equivariant MLP synthesis.",
        epilog=(
            "Caps can also be set via environment variables EQV_ORDER_CAP, "
            "EQV_LATTICE_CAP, and EQV_EXPLICIT_CAP; command-line flags win."
        ),
    )
    parser.add_argument(
        "--order-cap",
        type=int,
        default=_env_int("EQV_ORDER_CAP", DEFAULT_ORDER_CAP),
        help="maximum group order for closure",
    )
    parser.add_argument(
        "--lattice-cap",
        type=int,
        default=_env_int("EQV_LATTICE_CAP", DEFAULT_LATTICE_CAP),
        help="maximum group order for subgroup-lattice enumeration",
    )
    parser.add_argument(
        "--explicit-cap",
        type=int,
        default=_env_int("EQV_EXPLICIT_CAP", gsets.DEFAULT_EXPLICIT_CAP),
        help="maximum point count for explicit product G-sets",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("group", help="inspect a group and its natural action")
    _add_group_source(p)
    p.set_defaults(func=cmd_group)

    p = commands.add_parser("marks", help="table of marks as JSON (+ pretty table)")
    _add_group_source(p)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_marks)

    p = commands.add_parser(
        "decompose", help="decompose a power of a coset space into orbits"
    )
    _add_group_source(p)
    p.add_argument(
        "--subgroup-class",
        required=True,
        help="class index, label (c3_o4), or unique order selector (o12)",
    )
    p.add_argument("--power", type=int, default=1, help="product order D")
    p.add_argument(
        "--explicit",
        action="store_true",
        help="also enumerate the explicit product and require agreement",
    )
    p.add_argument(
        "--regular-order",
        action="store_true",
        help="report the minimal power with a regular orbit and its bounds",
    )
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_decompose)

    p = commands.add_parser(
        "pattern", help="parameter-sharing pattern between two actions"
    )
    p.add_argument("spec_in", help="input group: spec file or builtin token")
    p.add_argument("spec_out", help="output group: spec file or builtin token")
    p.add_argument(
        "--kernel",
        action="store_true",
        help="include the cross-correlation kernel slots (transitive only)",
    )
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_pattern)

    p = commands.add_parser("verify", help="check a dense matrix for equivariance")
    p.add_argument("matrix", help="JSON file with 'matrix' and optional 'bias'")
    p.add_argument("spec_in", help="input group: spec file or builtin token")
    p.add_argument("spec_out", help="output group: spec file or builtin token")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_verify)

    p = commands.add_parser("fit", help="train a regular-hidden-layer net on a target")
    _add_group_source(p)
    p.add_argument(
        "--target",
        required=True,
        help="built-in target: square_next | sum_sq | frozen_net",
    )
    p.add_argument("--channels", type=int, default=16)
    p.add_argument("--epochs", type=int, default=2000)
    p.add_argument("--batch-size", type=int, default=512)
    p.add_argument("--lr", type=float, default=0.05)
    p.add_argument("--momentum", type=float, default=0.9)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out", help="write the report JSON here instead of stdout")
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TargetNotEquivariant as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OrderCapExceeded, LatticeCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORDER_CAP
    except SizeCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXPLICIT_CAP
    except UnfaithfulAction as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNFAITHFUL


if __name__ == "__main__":
    sys.exit(main())
