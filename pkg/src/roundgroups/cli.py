"""Command-line entry point.

Exit codes: 0 certified primitive / no block system / success, 1 error,
2 inconclusive, 3 block system found.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import blocks, primitivity, trapdoor
from .cipher import MAX_TOY_WIDTH, parse_preset, toy_spec
from .errors import EnumerationTooLarge, SpecFormatError, UsageError
from .fieldfacts import hua_sweep, inversion_closed_subspaces
from .gf2 import DEFAULT_ENUM_BUDGET, random_subspace, to_hex
from .gf2m import FieldSpec
from .specfile import load_spec

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2
EXIT_BLOCKS_FOUND = 3
DEFAULT_SEED = 20060612


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _global_flags(suppress):
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(DEFAULT_SEED),
                   help=f"seed for every random choice (default {DEFAULT_SEED})")
    p.add_argument("--format", choices=("text", "json"), default=d("text"))
    p.add_argument("--budget", type=int, default=d(DEFAULT_ENUM_BUDGET),
                   help="cap on exhaustive subspace enumerations")
    p.add_argument("--sampled", action="store_true", default=d(False),
                   help="allow sampled (heuristic) closures above 16 bits")
    return p


def build_parser():
    parser = _Parser(prog="roundgroups", parents=[_global_flags(False)],
                     description="Primitivity and block systems of round-function groups "
                                 "of key-alternating block ciphers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    flags = _global_flags(True)

    p = sub.add_parser("analyze", parents=[flags], help="check the sufficient conditions "
                                                        "for primitivity")
    p.add_argument("spec", nargs="?", help="cipher spec file (JSON)")
    p.add_argument("--preset", help="'aes' or 'toy:<n_t>x<m>:<sbox>:<lambda>'")
    p.add_argument("-s", type=int, default=2, help="order bound s (gamma^s = 1)")

    p = sub.add_parser("find-blocks", parents=[flags], help="search for block systems")
    p.add_argument("spec", nargs="?")
    p.add_argument("--preset")
    p.add_argument("--samples", type=int, default=blocks.DEFAULT_SAMPLES,
                   help="v samples per basis vector in sampled mode")

    p = sub.add_parser("trapdoor", parents=[flags], help="planted-subspace demo")
    p.add_argument("--bits", type=int, default=8)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--pairs", type=int, default=10000, help="distinguisher sample size")
    p.add_argument("--trials", type=int, default=1, help="key-recovery trials")

    p = sub.add_parser("field", parents=[flags], help="finite-field checks")
    fsub = p.add_subparsers(dest="field_command", required=True, parser_class=_Parser)
    fa = fsub.add_parser("appendix", parents=[flags],
                         help="inversion-closed subspaces and Hua's identity")
    fa.add_argument("--m", type=int, required=True)
    fa.add_argument("--poly", type=lambda s: int(s, 0), default=0)
    return parser


def _load(args):
    if (args.spec is None) == (args.preset is None):
        raise UsageError("give exactly one of a spec file or --preset")
    if args.preset is not None:
        return parse_preset(args.preset, seed=args.seed), None
    return load_spec(args.spec)


def _emit(args, doc, text):
    if args.format == "json":
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_analyze(args):
    spec, _ = _load(args)
    report = primitivity.verify_primitivity(spec, s=args.s, budget=args.budget)
    _emit(args, report.to_dict(), report.render())
    return EXIT_OK if report.certified else EXIT_INCONCLUSIVE


def cmd_find_blocks(args):
    spec, planted = _load(args)
    if spec.n_b > MAX_TOY_WIDTH and not args.sampled:
        raise UsageError(f"n_b = {spec.n_b} is above the exhaustive limit of "
                         f"{MAX_TOY_WIDTH} bits; pass --sampled for a heuristic search")
    closure = blocks.find_linear_block_systems(spec, sampled=args.sampled or None,
                                               samples=args.samples, seed=args.seed)
    doc = {"closure": closure.to_dict()}
    text = [closure.render()]
    if spec.n_b <= blocks.MAX_ACTION_WIDTH and not args.sampled:
        action = blocks.group_action_blocks(spec)
        agree = action.exists_nontrivial == closure.exists_nontrivial
        doc["group_action"] = action.to_dict()
        doc["methods_agree"] = agree
        text += ["", action.render(), f"methods agree: {'yes' if agree else 'NO'}"]
    if planted is not None:
        hit = any(U <= planted for U in closure.invariant_subspaces)
        doc["planted_U"] = {"basis": planted.hex_basis(), "recovered": hit}
        text.append(f"planted U ({' '.join(planted.hex_basis())}): "
                    f"{'contains a reported subspace' if hit else 'not recovered'}")
    _emit(args, doc, "\n".join(text))
    return EXIT_BLOCKS_FOUND if closure.exists_nontrivial else EXIT_OK


def _control_cipher(bits, seed):
    if bits % 2 == 0 and 3 <= bits // 2 <= 8:
        return toy_spec(2, bits // 2, "inversion", "mixcolumns")
    return toy_spec(1, bits, "random", "identity", seed=seed)


def cmd_trapdoor(args):
    bits = args.bits
    dim = bits // 2 if args.dim is None else args.dim
    if not 0 < bits <= MAX_TOY_WIDTH:
        raise UsageError(f"--bits must be in 1..{MAX_TOY_WIDTH}")
    if not 0 < dim < bits:
        raise UsageError(f"--dim must satisfy 0 < dim < bits (dim = bits would make U = V)")
    td = trapdoor.build_trapdoor_cipher(bits, dim, seed=args.seed)
    U = td.planted_U
    control = _control_cipher(bits, args.seed)
    control_U = random_subspace(bits, dim, random.Random(args.seed))
    f_trap = trapdoor.truncated_distinguisher(td.cipher, U, args.pairs, seed=args.seed)
    f_ctrl = trapdoor.truncated_distinguisher(control, control_U, args.pairs, seed=args.seed)
    baseline = trapdoor.chance_baseline(bits, dim)

    rng = random.Random(args.seed)
    attacks = []
    for t in range(args.trials):
        key = rng.getrandbits(bits)
        pairs = trapdoor.oracle_pairs(td, key, count=2, seed=rng.getrandbits(32))
        res = trapdoor.coset_key_recovery(td, pairs)
        attacks.append({"key": to_hex(key, bits), "recovered": res.recovered_key == key,
                        **res.to_dict(bits)})
    bound = 2 * (1 << (bits // 2)) if bits % 2 == 0 else None
    trial_bound = (1 << (bits - dim)) + (1 << dim)
    ok = all(a["recovered"] and a["trial_count"] <= trial_bound for a in attacks)

    doc = {
        "cipher": td.cipher.name,
        "attack_model": "one round v -> v rho + k, known plaintext, U known to the attacker",
        "planted_U": U.hex_basis(),
        "distinguisher": {"trapdoor": f_trap, "control": f_ctrl, "control_cipher": control.name,
                          "baseline": baseline, "pairs": args.pairs},
        "attacks": attacks,
        "bound_2_sqrt_V": bound,
        "trial_bound": trial_bound,
        "full_search": 1 << bits,
        "all_recovered_within_bound": ok,
    }
    lines = [f"trapdoor cipher {td.cipher.name}",
             f"planted U (dim {dim}): {' '.join(U.hex_basis())}",
             f"distinguisher, {args.pairs} pairs: trapdoor {f_trap:.4f}, "
             f"control {control.name} {f_ctrl:.4f} (chance {baseline:.4f})",
             "attack model: one round v -> v rho + k, known plaintext, U known"]
    for a in attacks:
        lines.append(f"  key {a['key']}: recovered {a['recovered']}, trials {a['trial_count']} "
                     f"({a['coset_trials']} coset + {a['key_trials']} in-coset)")
    lines.append(f"trial bound 2^(n-d) + 2^d = {trial_bound}"
                 + (f", 2*sqrt|V| = {bound}" if bound else "")
                 + f", full search {1 << bits}")
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK if ok else EXIT_ERROR


def cmd_field(args):
    if not 2 <= args.m <= 8:
        raise UsageError(f"--m must be in 2..8, got {args.m}")
    F = FieldSpec(args.m, args.poly)
    catalog = inversion_closed_subspaces(F, budget=args.budget)
    checked, failures = hua_sweep(F)
    ok = catalog.all_subfields and not failures
    doc = catalog.to_dict()
    doc["hua"] = {"checked": checked, "failures": [list(p) for p in failures]}
    text = catalog.render() + (f"\nHua identity: {checked} valid pairs checked, "
                               f"{len(failures)} failures")
    _emit(args, doc, text)
    return EXIT_OK if ok else EXIT_INCONCLUSIVE


COMMANDS = {
    "analyze": cmd_analyze,
    "find-blocks": cmd_find_blocks,
    "trapdoor": cmd_trapdoor,
    "field": cmd_field,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
    except SpecFormatError as exc:
        print(f"error: malformed spec: {exc}", file=sys.stderr)
    except (UsageError, EnumerationTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
