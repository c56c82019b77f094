"""Sparse multivariate polynomials over exact coefficient domains.

Coefficients may be ``Fraction``, :class:`MultiQuad`, :class:`GF` or
:class:`GFp2`; plain ``int`` inputs are promoted to ``Fraction``. Variables
are strings ordered naturally (``x2`` before ``x10``) and two polynomials with
different variable sets are combined over the union.
"""

from __future__ import annotations

import ast
import re
from fractions import Fraction
from typing import Iterable, Mapping

from .finite_field import GF, GFp2
from .multiquad import MultiQuad

SCALAR_TYPES = (int, Fraction, MultiQuad, GF, GFp2)

MAX_VARIABLES = 8


def _natural_key(name: str):
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", name)]


def sort_variables(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(names), key=_natural_key))


def normalize_scalar(c):
    if isinstance(c, bool):
        raise TypeError("booleans are not polynomial coefficients")
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, MultiQuad):
        c = c.reduced()
        return c.coords[0] if c.is_rational() else c
    return c


class SparsePoly:
    """Immutable sparse polynomial: ``{exponent tuple: coefficient}``."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Iterable[str], terms: Mapping[tuple, object] | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"repeated variable in {variables}")
        if len(variables) > MAX_VARIABLES:
            raise ValueError(f"at most {MAX_VARIABLES} variables supported, got {len(variables)}")
        order = sort_variables(variables)
        perm = [variables.index(v) for v in order]
        clean: dict[tuple, object] = {}
        for exps, c in (terms or {}).items():
            if len(exps) != len(variables):
                raise ValueError(f"exponent vector {exps} does not match {variables}")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            c = normalize_scalar(c)
            if not c:
                continue
            key = tuple(exps[i] for i in perm)
            if key in clean:
                total = normalize_scalar(clean[key] + c)
                if total:
                    clean[key] = total
                else:
                    del clean[key]
            else:
                clean[key] = c
        object.__setattr__(self, "vars", order)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SparsePoly is immutable")

    # construction -------------------------------------------------------
    @classmethod
    def var(cls, name: str) -> "SparsePoly":
        return cls((name,), {(1,): 1})

    @classmethod
    def const(cls, c) -> "SparsePoly":
        return cls((), {(): c})

    @classmethod
    def parse(cls, text: str, variables: Iterable[str] = ()) -> "SparsePoly":
        return parse_poly(text, variables)

    def with_vars(self, variables: Iterable[str]) -> "SparsePoly":
        """Re-express over a superset of variables."""
        target = sort_variables(list(variables) + list(self.vars))
        if target == self.vars:
            return self
        idx = [target.index(v) for v in self.vars]
        out = {}
        for exps, c in self.terms.items():
            full = [0] * len(target)
            for i, e in zip(idx, exps):
                full[i] = e
            out[tuple(full)] = c
        return SparsePoly(target, out)

    def _align(self, other: "SparsePoly"):
        if self.vars == other.vars:
            return self, other
        names = list(self.vars) + list(other.vars)
        return self.with_vars(names), other.with_vars(names)

    @staticmethod
    def _lift(other):
        if isinstance(other, SparsePoly):
            return other
        if isinstance(other, SCALAR_TYPES) and not isinstance(other, bool):
            return SparsePoly.const(other)
        return None

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = SparsePoly._lift(other)
        if other is None:
            return NotImplemented
        a, b = self._align(other)
        out = dict(a.terms)
        for exps, c in b.terms.items():
            out[exps] = out[exps] + c if exps in out else c
        return SparsePoly(a.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = SparsePoly._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = SparsePoly._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            c = normalize_scalar(other)
            return SparsePoly(self.vars, {e: v * c for e, v in self.terms.items()})
        a, b = self._align(other)
        out: dict[tuple, object] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                prod = c1 * c2
                out[e] = out[e] + prod if e in out else prod
        return SparsePoly(a.vars, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, SparsePoly):
            if not other.is_constant():
                raise ValueError("division by a non-constant polynomial")
            other = other.constant_term()
        c = normalize_scalar(other)
        inv = Fraction(1) / c
        return SparsePoly(self.vars, {e: v * inv for e, v in self.terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = SparsePoly(self.vars, {(0,) * len(self.vars): 1})
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # predicates and accessors ------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        for e, c in self.terms.items():
            if not any(e):
                return c
        return Fraction(0)

    def __eq__(self, other):
        other = SparsePoly._lift(other)
        if other is None:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(str(self.trimmed()))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, var: str) -> int:
        if var not in self.vars:
            return 0 if self.terms else -1
        i = self.vars.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def used_vars(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms))

    def trimmed(self) -> "SparsePoly":
        """Drop variables that do not occur."""
        keep = [i for i, _ in enumerate(self.vars) if any(e[i] for e in self.terms)]
        return SparsePoly(
            [self.vars[i] for i in keep],
            {tuple(e[i] for i in keep): c for e, c in self.terms.items()},
        )

    def coefficient(self, monomial: Mapping[str, int]):
        """Coefficient of a monomial given as ``{var: exponent}``."""
        if any(v not in self.vars and e for v, e in monomial.items()):
            return Fraction(0)
        key = tuple(monomial.get(v, 0) for v in self.vars)
        return self.terms.get(key, Fraction(0))

    def coefficients_in(self, variables: Iterable[str]) -> dict[tuple, "SparsePoly"]:
        """Split into ``{exponents in variables: coefficient polynomial in the rest}``."""
        variables = tuple(variables)
        idx = [self.vars.index(v) if v in self.vars else None for v in variables]
        rest = [i for i, v in enumerate(self.vars) if v not in variables]
        rest_vars = [self.vars[i] for i in rest]
        buckets: dict[tuple, dict] = {}
        for e, c in self.terms.items():
            key = tuple(0 if i is None else e[i] for i in idx)
            buckets.setdefault(key, {})[tuple(e[i] for i in rest)] = c
        return {k: SparsePoly(rest_vars, t) for k, t in buckets.items()}

    def univariate_coeffs(self, var: str) -> list:
        """Dense coefficient list (low to high) of a polynomial in ``var`` only."""
        used = self.used_vars()
        if any(v != var for v in used):
            raise ValueError(f"{self} is not univariate in {var}")
        if not self.terms:
            return []
        i = self.vars.index(var) if var in self.vars else None
        deg = self.degree(var)
        coeffs = [Fraction(0)] * (deg + 1)
        for e, c in self.terms.items():
            coeffs[0 if i is None else e[i]] = c
        return coeffs

    @classmethod
    def from_univariate(cls, coeffs, var: str) -> "SparsePoly":
        return cls((var,), {(k,): c for k, c in enumerate(coeffs)})

    # substitution -------------------------------------------------------
    def subs(self, mapping: Mapping[str, object]) -> "SparsePoly":
        """Substitute polynomials or scalars for variables."""
        images = {}
        for v, val in mapping.items():
            if v in self.vars:
                images[v] = val if isinstance(val, SparsePoly) else SparsePoly.const(val)
        if not images:
            return self
        keep = [v for v in self.vars if v not in images]
        result = SparsePoly(keep, {})
        power_cache: dict[tuple[str, int], SparsePoly] = {}

        def power(v, k):
            key = (v, k)
            if key not in power_cache:
                power_cache[key] = images[v] ** k
            return power_cache[key]

        for e, c in self.terms.items():
            mono = SparsePoly(keep, {tuple(e[self.vars.index(v)] for v in keep): c})
            for i, v in enumerate(self.vars):
                if v in images and e[i]:
                    mono = mono * power(v, e[i])
            result = result + mono
        return result

    def evaluate(self, mapping: Mapping[str, object]):
        """Value at a point; every used variable must be assigned."""
        missing = [v for v in self.used_vars() if v not in mapping]
        if missing:
            raise ValueError(f"no value for variables {missing}")
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for i, v in enumerate(self.vars):
                if e[i]:
                    term = term * (normalize_scalar(mapping[v]) ** e[i])
            total = total + term
        return normalize_scalar(total)

    def map_coeffs(self, fn) -> "SparsePoly":
        return SparsePoly(self.vars, {e: fn(c) for e, c in self.terms.items()})

    def derivative(self, var: str) -> "SparsePoly":
        if var not in self.vars:
            return SparsePoly(self.vars, {})
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return SparsePoly(self.vars, out)

    # output -------------------------------------------------------------
    def sorted_terms(self):
        """Terms in graded-lex order, highest first."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def _mono_str(self, e) -> str:
        parts = []
        for v, k in zip(self.vars, e):
            if k == 1:
                parts.append(v)
            elif k > 1:
                parts.append(f"{v}^{k}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = self._mono_str(e)
            if isinstance(c, MultiQuad):
                body = f"({c})" if not mono else f"({c})*{mono}"
                sign = "+"
            else:
                neg = c < 0 if isinstance(c, Fraction) else False
                mag = -c if neg else c
                sign = "-" if neg else "+"
                if not mono:
                    body = str(mag)
                elif mag == 1:
                    body = mono
                else:
                    body = f"{mag}*{mono}"
            pieces.append((sign, body))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"SparsePoly({str(self)!r})"


def poly_identity_zero(f: SparsePoly) -> bool:
    return f.is_zero()


# parsing ---------------------------------------------------------------

def parse_poly(text: str, variables: Iterable[str] = ()) -> SparsePoly:
    """Parse ``x1^2 - 2*x2^2 + sqrt(2)*x0`` style text into a polynomial."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse polynomial {text!r}") from exc
    poly = _eval_node(tree.body)
    if not isinstance(poly, SparsePoly):
        poly = SparsePoly.const(poly)
    return poly.with_vars(variables) if variables else poly


def parse_scalar(text: str):
    """Parse an exact scalar such as ``-3/2``, ``2*sqrt(2)`` or ``1/sqrt(-6)``."""
    value = parse_poly(text)
    if not value.is_constant():
        raise ValueError(f"{text!r} is not a constant")
    return value.constant_term()


def _eval_node(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        if isinstance(node.value, float):
            raise ValueError("floating point literals are not exact")
        return Fraction(node.value)
    if isinstance(node, ast.Name):
        return SparsePoly.var(node.id)
    if isinstance(node, ast.UnaryOp):
        val = _eval_node(node.operand)
        if isinstance(node.op, ast.USub):
            return -val
        if isinstance(node.op, ast.UAdd):
            return val
    if isinstance(node, ast.BinOp):
        left, right = _eval_node(node.left), _eval_node(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if isinstance(right, SparsePoly):
                if not right.is_constant():
                    raise ValueError("division by a non-constant expression")
                right = right.constant_term()
            if isinstance(left, SparsePoly):
                return left / right
            return normalize_scalar(left * (Fraction(1) / right))
        if isinstance(node.op, ast.Pow):
            if isinstance(right, SparsePoly):
                right = right.constant_term() if right.is_constant() else None
            if not isinstance(right, Fraction) or right.denominator != 1 or right < 0:
                raise ValueError("exponents must be non-negative integers")
            k = int(right)
            if isinstance(left, SparsePoly):
                return left ** k
            return left ** k
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt":
        if len(node.args) != 1:
            raise ValueError("sqrt takes one argument")
        arg = _eval_node(node.args[0])
        if isinstance(arg, SparsePoly):
            if not arg.is_constant():
                raise ValueError("sqrt of a non-constant expression")
            arg = arg.constant_term()
        if not isinstance(arg, Fraction):
            raise ValueError("sqrt argument must be rational")
        return normalize_scalar(MultiQuad.sqrt(arg))
    raise ValueError(f"unsupported expression element: {ast.dump(node)}")


# univariate helpers ----------------------------------------------------

def _strip(coeffs: list) -> list:
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _divmod_univariate(a: list, b: list):
    a, b = _strip(a), _strip(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    quot = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead_inv = Fraction(1) / b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        factor = normalize_scalar(a[-1] * lead_inv)
        quot[shift] = factor
        for i, c in enumerate(b):
            a[shift + i] = normalize_scalar(a[shift + i] - factor * c)
        a = _strip(a)
    return _strip(quot), a


def univariate_gcd(f: list, g: list) -> list:
    """Monic gcd of two dense coefficient lists over a field."""
    a, b = _strip(f), _strip(g)
    while b:
        _, r = _divmod_univariate(a, b)
        a, b = b, r
    if not a:
        return []
    inv = Fraction(1) / a[-1]
    return [normalize_scalar(c * inv) for c in a]


def sylvester_matrix(f: list, g: list) -> list[list]:
    f, g = _strip(f), _strip(g)
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(f)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(g)):
            row[i + j] = c
        rows.append(row)
    return rows


def resultant_univariate(f: SparsePoly, g: SparsePoly):
    """Resultant of two univariate polynomials as the Sylvester determinant."""
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of the zero polynomial")
    used = set(f.used_vars()) | set(g.used_vars())
    if len(used) > 1:
        raise ValueError("resultant_univariate needs polynomials in a single variable")
    var = used.pop() if used else "x"
    fc, gc = f.univariate_coeffs(var), g.univariate_coeffs(var)
    if len(fc) == 1 and len(gc) == 1:
        return Fraction(1)
    if len(fc) == 1:
        return normalize_scalar(fc[0] ** (len(gc) - 1))
    if len(gc) == 1:
        return normalize_scalar(gc[0] ** (len(fc) - 1))
    from .matrix import ExactMatrix

    # rows of g first: the value is lc(g)^deg(f) times the product of f over the roots of g
    return ExactMatrix(sylvester_matrix(gc, fc)).det()


def multiplicity_at_zero(coeffs: list) -> int:
    for k, c in enumerate(coeffs):
        if c:
            return k
    return len(coeffs)


def binary_forms_common_length(forms: list[SparsePoly], u: str, v: str) -> int | None:
    """Number of common zeros in P^1, with multiplicity, of binary forms in ``u, v``.

    Returns ``None`` when every form vanishes identically (infinite intersection).
    """
    nonzero = [f for f in forms if not f.is_zero()]
    if not nonzero:
        return None
    g = None
    inf = None
    for f in nonzero:
        affine = f.subs({v: 1}).univariate_coeffs(u)
        g = affine if g is None else univariate_gcd(g, affine)
        # multiplicity of the point v = 0 (i.e. [1:0]) on this form
        at_inf = multiplicity_at_zero(f.subs({u: 1}).univariate_coeffs(v))
        inf = at_inf if inf is None else min(inf, at_inf)
    deg = len(_strip(g)) - 1
    return deg + inf
