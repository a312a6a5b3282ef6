"""Reading and writing cipher specs as JSON documents.

Fields: ``name``, ``n_t``, ``m``, ``sboxes`` (list of n_t tables, or one of
"inversion", "identity", "random"), ``lambda`` (list of n_b hex rows, or one
of "aes", "identity", "rotate", "random", "mixcolumns"), optional ``seed``,
optional ``poly`` (reduction polynomial for inversion / mixcolumns), and
optional ``planted_U`` (hex basis rows of a planted invariant subspace).
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from .cipher import (CipherSpec, Partition, SBoxTable, block_rotation, mixcolumns_analogue,
                     aes_lambda)
from .errors import SpecFormatError, UsageError
from .gf2 import BitMatrix, Subspace, random_invertible
from .gf2m import FieldSpec


def _require(doc, key, kind):
    if key not in doc:
        raise SpecFormatError("missing required field", f"field '{key}'")
    value = doc[key]
    if kind is int and (not isinstance(value, int) or isinstance(value, bool)):
        raise SpecFormatError(f"expected an integer, got {value!r}", f"field '{key}'")
    return value


def _parse_int(value, where):
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    if isinstance(value, str):
        try:
            return int(value, 0)
        except ValueError:
            pass
    raise SpecFormatError(f"expected an integer or hex string, got {value!r}", where)


def spec_from_dict(doc: dict):
    """Build (CipherSpec, planted subspace or None) from a parsed document."""
    if not isinstance(doc, dict):
        raise SpecFormatError("top level must be an object")
    n_t = _require(doc, "n_t", int)
    m = _require(doc, "m", int)
    seed = doc.get("seed", 0)
    if not isinstance(seed, int):
        raise SpecFormatError(f"expected an integer, got {seed!r}", "field 'seed'")
    name = doc.get("name", "cipher")
    rng = random.Random(seed)
    try:
        partition = Partition(n_t, m)
    except UsageError as exc:
        raise SpecFormatError(str(exc), "field 'n_t'/'m'") from None
    n_b = partition.n_b

    def field_spec():
        poly = _parse_int(doc["poly"], "field 'poly'") if "poly" in doc else 0
        try:
            return FieldSpec(m, poly)
        except (UsageError, KeyError) as exc:
            raise SpecFormatError(str(exc), "field 'poly'") from None

    sboxes = _require(doc, "sboxes", None)
    if sboxes == "inversion":
        sboxes = [SBoxTable.inversion(field_spec())] * n_t
    elif sboxes == "identity":
        sboxes = [SBoxTable.identity(m)] * n_t
    elif sboxes == "random":
        sboxes = [SBoxTable.random(m, rng) for _ in range(n_t)]
    elif isinstance(sboxes, list):
        if len(sboxes) != n_t:
            raise SpecFormatError(f"expected {n_t} tables, got {len(sboxes)}", "field 'sboxes'")
        tables = []
        for i, t in enumerate(sboxes):
            if not isinstance(t, list) or not all(isinstance(x, int) for x in t):
                raise SpecFormatError("expected a list of integers", f"field 'sboxes[{i}]'")
            try:
                tables.append(SBoxTable(m, tuple(t)))
            except UsageError as exc:
                raise SpecFormatError(str(exc), f"field 'sboxes[{i}]'") from None
        sboxes = tables
    else:
        raise SpecFormatError(f"unsupported value {sboxes!r}", "field 'sboxes'")

    lam = _require(doc, "lambda", None)
    if lam == "identity":
        lam = BitMatrix.identity(n_b)
    elif lam == "aes":
        if (n_t, m) != (16, 8):
            raise SpecFormatError("the 'aes' mixing layer needs n_t = 16, m = 8",
                                  "field 'lambda'")
        lam = aes_lambda()
    elif lam == "rotate":
        lam = block_rotation(n_t, m)
    elif lam == "random":
        lam = random_invertible(n_b, rng)
    elif lam == "mixcolumns":
        try:
            lam = mixcolumns_analogue(n_t, field_spec())
        except UsageError as exc:
            raise SpecFormatError(str(exc), "field 'lambda'") from None
    elif isinstance(lam, list):
        if len(lam) != n_b:
            raise SpecFormatError(f"expected {n_b} rows, got {len(lam)}", "field 'lambda'")
        rows = []
        for i, r in enumerate(lam):
            if not isinstance(r, str):
                raise SpecFormatError("expected a hex string", f"field 'lambda[{i}]'")
            try:
                rows.append(int(r, 16))
            except ValueError:
                raise SpecFormatError(f"bad hex row {r!r}", f"field 'lambda[{i}]'") from None
        try:
            lam = BitMatrix(tuple(rows), n_b)
        except UsageError as exc:
            raise SpecFormatError(str(exc), "field 'lambda'") from None
    else:
        raise SpecFormatError(f"unsupported value {lam!r}", "field 'lambda'")

    try:
        spec = CipherSpec(partition, sboxes, lam, name=name)
    except UsageError as exc:
        raise SpecFormatError(str(exc)) from None

    planted = None
    if "planted_U" in doc:
        rows = doc["planted_U"]
        if not isinstance(rows, list):
            raise SpecFormatError("expected a list of hex rows", "field 'planted_U'")
        try:
            planted = Subspace.span(n_b, (int(r, 16) for r in rows))
        except (ValueError, TypeError, UsageError) as exc:
            raise SpecFormatError(str(exc), "field 'planted_U'") from None
    return spec, planted


def loads_spec(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    return spec_from_dict(doc)


def load_spec(path):
    """Read a spec file; FileNotFoundError propagates unchanged."""
    return loads_spec(Path(path).read_text())


def spec_to_dict(spec: CipherSpec, planted_U: Subspace | None = None) -> dict:
    doc = {
        "name": spec.name,
        "n_t": spec.n_t,
        "m": spec.m,
        "sboxes": [list(s.table) for s in spec.sboxes],
        "lambda": spec.lam.to_hex_rows(),
    }
    if planted_U is not None:
        doc["planted_U"] = planted_U.hex_basis()
    return doc


def dump_spec(spec: CipherSpec, path, planted_U=None):
    Path(path).write_text(json.dumps(spec_to_dict(spec, planted_U)) + "\n")
