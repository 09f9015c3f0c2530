"""Operator text format: JSON with nested integer coefficient lists, a
global denominator, a variable name and a form tag ("d" for powers of
d/dvar, "theta" for powers of var*d/dvar)."""

import json

from gmpy2 import mpq, mpz

from .diffop import DiffOp
from .exact import UPoly, gcd_int


def serialize_operator(L: DiffOp, variable="t", form="d"):
    if form != "d":
        raise ValueError("serialization emits d-form only")
    coeffs = []
    den = mpz(1)
    for c in L.coeffs:
        for co in c.coeffs:
            den = den * co.denominator // gcd_int(den, co.denominator)
    for c in L.coeffs:
        coeffs.append([int(co * den) for co in c.coeffs])
    return json.dumps({
        "format": "schoen-operator",
        "version": 1,
        "variable": variable,
        "form": "d",
        "denominator": int(den),
        "coefficients": coeffs,
    }, indent=1)


def parse_operator(text) -> DiffOp:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError("malformed operator file: %s" % e) from None
    for key in ("form", "coefficients"):
        if key not in data:
            raise ValueError("malformed operator file: missing %r" % key)
    form = data["form"]
    if form not in ("d", "theta"):
        raise ValueError("unknown operator form %r" % form)
    den = mpq(data.get("denominator", 1))
    if den <= 0:
        raise ValueError("denominator must be positive")
    coeffs = []
    for row in data["coefficients"]:
        if not isinstance(row, list):
            raise ValueError("coefficients must be nested lists")
        coeffs.append(UPoly([mpq(c) / den for c in row]))
    if not any(not c.is_zero() for c in coeffs):
        raise ValueError("zero operator")
    if form == "theta":
        return DiffOp.from_theta(coeffs)
    return DiffOp(coeffs)


def load_operator(path) -> DiffOp:
    with open(path, "r") as fh:
        return parse_operator(fh.read())
