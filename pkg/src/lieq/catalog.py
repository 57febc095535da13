"""Constructors for the cataloged nilpotent algebras and their solvable
extensions.

Family tokens (also the CLI vocabulary):

  nilradicals:   n_n3 (n >= 5), n_m1 (m >= 4), n_53 (alias of n_n3 at n=5)
  one-generator: s_n1_1(beta) ... s_n1_9, dimension n+1 over n_n3, n >= 6
  two-generator: s_n2, dimension n+2 over n_n3, n >= 6
  extra at n=6:  s6_10(alpha != 0), dimension 7 (alias s_7_10)
  n=5 list:      s6_1(beta), s6_2, s6_4, s6_5, s6p_6, s6_7, s6p_8, s6p_9, s_7
  filiform ext.: sw_m1_1(beta) ... sw_m1_6, sw_m2 over n_m1

Every constructor output passes the Jacobi check; this is asserted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .liealg import LieAlgebra, change_basis, check_jacobi
from .linalg import Matrix
from .rationals import rat, rat_str


class DimensionTooSmall(ValueError):
    pass


class InvalidParams(ValueError):
    pass


class UnknownFamily(ValueError):
    pass


NILRADICAL_FAMILIES = ("n_n3", "n_m1", "n_53")

MAIN_FAMILIES = (
    "s_n1_1",
    "s_n1_2",
    "s_n1_3",
    "s_n1_4",
    "s_n1_5",
    "s_n1_6",
    "s_n1_7",
    "s_n1_8",
    "s_n1_9",
    "s_n2",
)

DIM5_FAMILIES = (
    "s6_1",
    "s6_2",
    "s6_4",
    "s6_5",
    "s6p_6",
    "s6_7",
    "s6p_8",
    "s6p_9",
    "s_7",
)

SW_FAMILIES = (
    "sw_m1_1",
    "sw_m1_2",
    "sw_m1_3",
    "sw_m1_4",
    "sw_m1_5",
    "sw_m1_6",
    "sw_m2",
)

ALL_FAMILIES = MAIN_FAMILIES + ("s6_10",) + DIM5_FAMILIES + SW_FAMILIES


@dataclass
class ExtensionSpec:
    """Symbolic name of one cataloged solvable extension.

    n is the nilradical dimension (m for the sw_* tokens). Parameters are
    exact rationals keyed by name: beta, alpha, eps, a2, a3, ...
    """

    family: str
    n: int
    params: dict = field(default_factory=dict)
    basis: str = "e"

    def __post_init__(self):
        self.params = {k: rat(v) for k, v in self.params.items()}
        if self.basis not in ("e", "x"):
            raise InvalidParams(f"basis must be 'e' or 'x', got {self.basis!r}")

    def param(self, name, default=0) -> Fraction:
        return self.params.get(name, Fraction(default))

    def a_params(self, lo: int, hi: int) -> dict:
        return {j: self.param(f"a{j}") for j in range(lo, hi + 1)}

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "params": {k: rat_str(v) for k, v in sorted(self.params.items())},
            "basis": self.basis,
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "ExtensionSpec":
        return cls(
            payload["family"],
            payload["n"],
            {k: rat(v) for k, v in payload.get("params", {}).items()},
            payload.get("basis", "e"),
        )

    def label(self) -> str:
        if not self.params:
            return f"{self.family}[n={self.n}]"
        ps = ",".join(f"{k}={rat_str(v)}" for k, v in sorted(self.params.items()))
        return f"{self.family}[n={self.n},{ps}]"


# ---------------------------------------------------------------------------
# nilradicals
# ---------------------------------------------------------------------------

def _nilradical_brackets_e(n: int) -> dict:
    """Flag-adapted table of the n-dimensional nilradical (0-based keys)."""
    if n == 5:
        return {
            (1, 4): {0: 1},
            (2, 3): {0: 1},
            (3, 4): {2: -1},
        }
    table = {
        (1, n - 1): {0: 1},
        (2, n - 2): {0: 1},
        (3, n - 1): {1: 1},
        (n - 2, n - 1): {2: -1},
    }
    for k in range(5, n - 1):
        table[(k - 1, n - 1)] = {k - 2: 1}
    return table


def _nilradical_brackets_x(n: int) -> dict:
    if n == 5:
        return {
            (1, 4): {0: 1},
            (2, 3): {0: 1},
            (3, 4): {1: 1},
        }
    table = {
        (1, n - 1): {0: 1},
        (2, n - 2): {0: 1},
        (n - 2, n - 1): {1: 1},
    }
    for k in range(4, n - 1):
        table[(k - 1, n - 2)] = {k - 2: 1}
    return table


def make_nilradical(kind: str, n: int, basis: str = "e") -> LieAlgebra:
    """Construct a cataloged nilpotent algebra in the requested basis."""
    if kind == "n_53":
        if n != 5:
            raise InvalidParams("n_53 is the 5-dimensional member")
        kind = "n_n3"
    if kind == "n_n3":
        if n < 5:
            raise DimensionTooSmall("n_n3 needs n >= 5")
        if basis == "e":
            g = LieAlgebra(n, _nilradical_brackets_e(n))
        elif basis == "x":
            names = tuple(f"x{i + 1}" for i in range(n))
            g = LieAlgebra(n, _nilradical_brackets_x(n), names)
        else:
            raise InvalidParams(f"unknown basis {basis!r}")
    elif kind == "n_m1":
        if n < 4:
            raise DimensionTooSmall("n_m1 needs m >= 4")
        table = {(k - 1, n - 1): {k - 2: 1} for k in range(2, n)}
        g = LieAlgebra(n, table, tuple(f"y{i + 1}" for i in range(n)))
    else:
        raise UnknownFamily(f"unknown nilradical kind {kind!r}")
    assert check_jacobi(g).ok
    return g


def flag_permutation(n: int) -> Matrix:
    """Involution sending the raw basis to the flag-adapted one (and back)."""
    perm = list(range(n))
    perm[1], perm[2] = perm[2], perm[1]
    perm[n - 2], perm[n - 1] = perm[n - 1], perm[n - 2]
    cols = []
    for j in range(n):
        col = [Fraction(0)] * n
        col[perm[j]] = Fraction(1)
        cols.append(col)
    return Matrix.from_columns(cols)


# ---------------------------------------------------------------------------
# solvable extensions of n_n3
# ---------------------------------------------------------------------------

def _family1_action(n: int, alpha, beta) -> dict:
    """Diagonal one-generator action: weights (alpha+2beta, 2beta,
    alpha+beta, (3-k)alpha+2beta, ..., beta, alpha). Valid for n >= 5."""
    alpha, beta = rat(alpha), rat(beta)
    action = {
        1: {1: alpha + 2 * beta},
        2: {2: 2 * beta},
        3: {3: alpha + beta},
        n - 1: {n - 1: beta},
        n: {n: alpha},
    }
    for k in range(4, n - 1):
        action[k] = {k: (3 - k) * alpha + 2 * beta}
    return action


def _add_term(action: dict, j: int, k: int, coeff):
    slot = action.setdefault(j, {})
    slot[k] = slot.get(k, Fraction(0)) + rat(coeff)


def _s_n1_8_action(n: int, a: dict) -> dict:
    """Nilpotent-plus-half-weights action with lower-triangular tail a_j.

    The tail of [f, e_k] is a_{k-l+1} e_l for 4 <= l <= k-2 plus
    a_{k-2} e_2 + a_{k-1} e_1; the e_2 term exists only for k >= 5 (the
    bracket chain skips e_3, so at k = 4 only the e_1 term survives).
    """
    action = {
        1: {1: Fraction(1)},
        2: {2: Fraction(1)},
        3: {3: Fraction(1, 2)},
        n - 1: {n - 1: Fraction(1, 2)},
        n: {},
    }
    if a.get(2):
        _add_term(action, n - 1, 3, a[2])
    for k in range(4, n - 1):
        action[k] = {k: Fraction(1)}
        for l in range(4, k - 1):
            if a.get(k - l + 1):
                _add_term(action, k, l, a[k - l + 1])
        if k >= 5 and a.get(k - 2):
            _add_term(action, k, 2, a[k - 2])
        if a.get(k - 1):
            _add_term(action, k, 1, a[k - 1])
    return action


def _check_a_normalization(a: dict, lo: int, hi: int):
    values = [a.get(j, Fraction(0)) for j in range(lo, hi + 1)]
    if not any(values):
        raise InvalidParams("at least one a_j must be nonzero")
    for j in range(lo, hi + 1):
        if j % 2 == 0 and a.get(j):
            if a[j] != 1:
                raise InvalidParams("first nonzero even-index a_j must be 1")
            return
    for j in range(lo, hi + 1):
        if a.get(j):
            if a[j] not in (1, -1):
                raise InvalidParams(
                    "with all even-index a_j zero, the first nonzero odd-index "
                    "a_j must be +1 or -1"
                )
            return


def _main_family_action(spec: ExtensionSpec):
    """f-action table(s) for the one- and two-generator families over n_n3."""
    n, fam = spec.n, spec.family
    if fam == "s_n1_1":
        beta = spec.param("beta")
        excluded = (Fraction(0), Fraction(-1, 2), Fraction(n - 5, 2))
        if beta in excluded:
            raise InvalidParams(
                f"beta={rat_str(beta)} is excluded for s_n1_1 at n={n}"
            )
        return [_family1_action(n, 1, beta)]
    if fam == "s_n1_2":
        return [_family1_action(n, 1, Fraction(n - 5, 2))]
    if fam == "s_n1_3":
        return [_family1_action(n, 1, 0)]
    if fam == "s_n1_4":
        return [_family1_action(n, 1, Fraction(-1, 2))]
    if fam == "s_n1_5":
        return [_family1_action(n, 0, 1)]
    if fam == "s_n1_6":
        eps = spec.param("eps", 1)
        if eps not in (1, -1):
            raise InvalidParams("eps must be +1 or -1")
        action = _family1_action(n, 1, Fraction(n - 4, 2))
        _add_term(action, n, n - 2, eps)
        return [action]
    if fam == "s_n1_7":
        action = _family1_action(n, 1, 0)
        _add_term(action, 3, 1, -1)
        _add_term(action, n - 1, 2, 1)
        return [action]
    if fam == "s_n1_8":
        a = spec.a_params(2, n - 3)
        _check_a_normalization(a, 2, n - 3)
        return [_s_n1_8_action(n, a)]
    if fam == "s_n1_9":
        action = _family1_action(n, 1, 1)
        _add_term(action, 3, 2, -1)
        _add_term(action, n - 1, 4, 1)
        _add_term(action, n, n - 1, 1)
        return [action]
    if fam == "s_n2":
        return [_family1_action(n, 1, 0), _family1_action(n, 0, 1)]
    if fam == "s6_10":
        alpha = spec.param("alpha")
        if alpha == 0:
            raise InvalidParams("s6_10 needs alpha != 0")
        action = _family1_action(6, 1, 1)
        _add_term(action, 3, 2, -1)
        _add_term(action, 5, 4, 1)
        _add_term(action, 6, 5, 1)
        _add_term(action, 6, 4, alpha)
        return [action]
    raise UnknownFamily(f"unknown family {fam!r}")


def _diag_action(weights) -> dict:
    return {j + 1: {j + 1: rat(w)} for j, w in enumerate(weights) if rat(w) != 0}


def _dim5_family_action(spec: ExtensionSpec):
    fam = spec.family
    if fam == "s6_1":
        beta = spec.param("beta")
        if beta in (Fraction(0), Fraction(-1, 2)):
            raise InvalidParams(f"beta={rat_str(beta)} is excluded for s6_1")
        return [_diag_action((1 + 2 * beta, 2 * beta, 1 + beta, beta, 1))]
    if fam == "s6_2":
        return [_diag_action((1, 0, 1, 0, 1))]
    if fam == "s6_4":
        return [_diag_action((0, -1, Fraction(1, 2), Fraction(-1, 2), 1))]
    if fam == "s6_5":
        return [_diag_action((2, 2, 1, 1, 0))]
    if fam == "s6p_6":
        action = _diag_action((2, 1, Fraction(3, 2), Fraction(1, 2), 1))
        _add_term(action, 5, 2, 1)
        return [action]
    if fam == "s6_7":
        action = _diag_action((1, 0, 1, 0, 1))
        _add_term(action, 3, 1, -1)
        _add_term(action, 4, 2, 1)
        return [action]
    if fam == "s6p_8":
        action = _diag_action((2, 2, 1, 1, 0))
        _add_term(action, 4, 3, -1)
        return [action]
    if fam == "s6p_9":
        action = _diag_action((3, 2, 2, 1, 1))
        _add_term(action, 2, 3, -1)
        _add_term(action, 4, 5, 1)
        return [action]
    if fam == "s_7":
        return [_diag_action((1, 0, 1, 0, 1)), _diag_action((2, 2, 1, 1, 0))]
    raise UnknownFamily(f"unknown family {fam!r}")


def _sw_family_action(spec: ExtensionSpec):
    m, fam = spec.n, spec.family

    def swdiag(alpha, beta):
        alpha, beta = rat(alpha), rat(beta)
        action = {k: {k: (m - k - 1) * alpha + beta} for k in range(1, m)}
        action[m] = {m: alpha}
        return action

    if fam == "sw_m1_1":
        beta = spec.param("beta")
        if beta in (Fraction(0), Fraction(m - 2)):
            raise InvalidParams(f"beta={rat_str(beta)} is excluded for sw_m1_1")
        return [swdiag(1, beta)]
    if fam == "sw_m1_2":
        return [swdiag(1, 0)]
    if fam == "sw_m1_3":
        return [swdiag(1, 2 - m)]
    if fam == "sw_m1_4":
        return [swdiag(0, 1)]
    if fam == "sw_m1_5":
        eps = spec.param("eps", 1)
        if eps not in (1, -1):
            raise InvalidParams("eps must be +1 or -1")
        action = swdiag(1, 1)
        _add_term(action, m, m - 1, eps)
        return [action]
    if fam == "sw_m1_6":
        a = spec.a_params(3, m - 1)
        _check_a_normalization(a, 3, m - 1)
        action = {m: {}}
        for k in range(1, m):
            action[k] = {k: Fraction(1)}
            for l in range(1, k - 1):
                if a.get(k - l + 1):
                    _add_term(action, k, l, a[k - l + 1])
        return [action]
    if fam == "sw_m2":
        return [swdiag(1, 0), swdiag(0, 1)]
    raise UnknownFamily(f"unknown family {fam!r}")


def _assemble(nilradical: LieAlgebra, actions, f_names) -> LieAlgebra:
    n = nilradical.dim
    p = len(actions)
    brackets = {k: dict(v) for k, v in nilradical.brackets.items()}
    for a, action in enumerate(actions):
        fa = n + a
        for j, terms in action.items():
            entry = {k - 1: -rat(c) for k, c in terms.items() if rat(c) != 0}
            if entry:
                brackets[(j - 1, fa)] = entry
    names = tuple(nilradical.basis_names) + tuple(f_names)
    return LieAlgebra(n + p, brackets, names)


def make_extension(spec: ExtensionSpec) -> LieAlgebra:
    """Solvable extension named by spec: nilradical basis first, then the
    non-nilpotent generator(s) f (and f2)."""
    fam, n = spec.family, spec.n
    if fam in SW_FAMILIES:
        nil = make_nilradical("n_m1", n)
        actions = _sw_family_action(spec)
    elif fam in DIM5_FAMILIES:
        if n != 5:
            raise InvalidParams(f"{fam} is defined over the 5-dimensional nilradical")
        nil = make_nilradical("n_n3", 5)
        actions = _dim5_family_action(spec)
    elif fam == "s6_10":
        if n != 6:
            raise InvalidParams("s6_10 is defined over the 6-dimensional nilradical")
        nil = make_nilradical("n_n3", 6)
        actions = _main_family_action(spec)
    elif fam in MAIN_FAMILIES:
        if n < 6:
            raise InvalidParams(
                f"{fam} needs n >= 6; the n = 5 extensions have their own tokens"
            )
        nil = make_nilradical("n_n3", n)
        actions = _main_family_action(spec)
    else:
        raise UnknownFamily(f"unknown family {spec.family!r}")

    f_names = ("f",) if len(actions) == 1 else ("f1", "f2")
    g = _assemble(nil, actions, f_names)
    if spec.basis == "x":
        if fam in SW_FAMILIES:
            raise InvalidParams("sw_* families have no alternate basis")
        perm = flag_permutation(n)
        full = Matrix.identity(g.dim)
        data = [list(row) for row in full.data]
        for i in range(n):
            for j in range(n):
                data[i][j] = perm[i, j]
        names = tuple(f"x{i + 1}" for i in range(n)) + tuple(f_names)
        g = change_basis(g, Matrix(data), names)
    assert check_jacobi(g).ok, f"constructor produced a non-Lie table for {fam}"
    return g


# ---------------------------------------------------------------------------
# spec enumeration (test-harness driver)
# ---------------------------------------------------------------------------

DEFAULT_BETAS = (Fraction(2), Fraction(-3))


def _default_a_vectors(count: int):
    if count <= 0:
        return []
    first = [1] + [0] * (count - 1)
    vectors = [tuple(first)]
    if count >= 2:
        second = [0, 1] + [0] * (count - 2)
        vectors.append(tuple(second))
    return vectors


def enumerate_specs(n: int, sample_params: dict | None = None):
    """One spec per family valid at dimension n, with sampled parameters.

    Defaults: beta in {2, -3} (invalid values for the given n are
    dropped), both eps signs, the a-vectors (1,0,...) and (0,1,0,...),
    and alpha=3 for s6_10.
    """
    if n < 5:
        raise DimensionTooSmall("enumerate_specs needs n >= 5")
    sp = dict(sample_params or {})
    betas = [rat(b) for b in sp.get("beta", DEFAULT_BETAS)]
    epss = [rat(e) for e in sp.get("eps", (1, -1))]
    alpha = rat(sp.get("alpha", 3))

    specs = []
    if n == 5:
        s61_betas = [b for b in betas if b not in (Fraction(0), Fraction(-1, 2))]
        for b in s61_betas or [Fraction(2)]:
            specs.append(ExtensionSpec("s6_1", 5, {"beta": b}))
        for fam in ("s6_2", "s6_4", "s6_5", "s6p_6", "s6_7", "s6p_8", "s6p_9", "s_7"):
            specs.append(ExtensionSpec(fam, 5))
        return specs

    excluded = (Fraction(0), Fraction(-1, 2), Fraction(n - 5, 2))
    s11_betas = [b for b in betas if b not in excluded]
    for b in s11_betas or [rat(n)]:
        specs.append(ExtensionSpec("s_n1_1", n, {"beta": b}))
    for fam in ("s_n1_2", "s_n1_3", "s_n1_4", "s_n1_5"):
        specs.append(ExtensionSpec(fam, n))
    for e in epss:
        specs.append(ExtensionSpec("s_n1_6", n, {"eps": e}))
    specs.append(ExtensionSpec("s_n1_7", n))
    a_vectors = sp.get("a_vectors") or _default_a_vectors(n - 4)
    for vec in a_vectors:
        params = {f"a{j + 2}": rat(v) for j, v in enumerate(vec) if rat(v) != 0}
        specs.append(ExtensionSpec("s_n1_8", n, params))
    specs.append(ExtensionSpec("s_n1_9", n))
    specs.append(ExtensionSpec("s_n2", n))
    if n == 6:
        specs.append(ExtensionSpec("s6_10", 6, {"alpha": alpha}))
    return specs
