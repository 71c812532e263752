"""Exact rational and floating-point linear algebra.

Matrices are passed as lists of rows. Rational entries may be ints or
strings such as "3/4"; results come back in the same JSON shapes the CLI
and HTTP API use.
"""

import json

from . import _core
from ._core import MatrixFirstError

__all__ = [
    "MatrixFirstError",
    "Session",
    "compute",
    "compute_ops",
    "ref",
    "rref",
    "solve",
    "inv",
    "det",
    "lu",
    "qr",
    "lstsq",
    "minpoly",
    "eig",
    "krylov",
    "basis_check",
    "change_basis",
    "gs_compare",
    "charpoly_cost",
]


def _entry(x):
    if isinstance(x, float):
        return x
    return str(x)


def _rows(matrix):
    if isinstance(matrix, str):
        return matrix
    return [[_entry(x) for x in row] for row in matrix]


def compute_ops():
    return list(_core.compute_ops())


def compute(op, matrix=None, **args):
    request = {"args": args}
    if matrix is not None:
        request["matrix"] = _rows(matrix)
    return json.loads(_core.compute(op, json.dumps(request)))


def ref(matrix, **args):
    return compute("ref", matrix, **args)


def rref(matrix, **args):
    return compute("rref", matrix, **args)


def solve(matrix, rhs, **args):
    return compute("solve", matrix, rhs=[_entry(x) for x in rhs], **args)


def inv(matrix, **args):
    return compute("inv", matrix, **args)


def det(matrix, **args):
    return compute("det", matrix, **args)["det"]


def lu(matrix, **args):
    return compute("lu", matrix, **args)


def qr(matrix):
    return compute("qr", matrix, float=True)


def lstsq(matrix, rhs):
    return compute("lstsq", matrix, rhs=[float(x) for x in rhs], float=True)


def minpoly(matrix):
    return compute("minpoly", matrix)["minpoly"]


def eig(matrix, **args):
    return compute("eig", matrix, **args)


def krylov(matrix, vector):
    return compute("krylov", matrix, vector=[_entry(x) for x in vector])


def basis_check(vectors_as_columns, **args):
    return compute("basis-check", vectors_as_columns, **args)


def change_basis(matrix, basis):
    return compute("change-basis", matrix, basis=_rows(basis))


def gs_compare(matrix):
    return compute("gs-compare", matrix, float=True)


def charpoly_cost(n, seed=1):
    return compute("charpoly-cost", None, n=n, seed=seed)


class Session:
    """A row-reduction or Krylov session driven through the v1 API routes."""

    def __init__(self, matrix, mode="reduce_to_ref", b=None, service=None):
        self._service = service or _core.Service()
        body = {"matrix": _rows(matrix), "mode": mode}
        if b is not None:
            body["b"] = [_entry(x) for x in b]
        created = self._call("POST", "/v1/session", body)
        self.id = created["id"]

    def _call(self, method, path, body=None):
        status, text = self._service.handle(method, path, "" if body is None else json.dumps(body))
        payload = json.loads(text)
        if status != 200:
            raise MatrixFirstError(payload.get("message", ""), text)
        return payload

    def state(self):
        return self._call("GET", f"/v1/session/{self.id}")

    def apply(self, op):
        return self._call("POST", f"/v1/session/{self.id}/op", {"op": op})

    def hint(self):
        return self._call("POST", f"/v1/session/{self.id}/hint")

    def whatif(self, op):
        return self._call("POST", f"/v1/session/{self.id}/whatif", {"op": op})

    def export(self):
        return self._call("GET", f"/v1/session/{self.id}/export")

    def verify(self, transcript=None):
        return self._call("POST", "/v1/verify", {"transcript": transcript or self.export()})
