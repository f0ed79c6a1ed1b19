"""
Executable versions of the derivations: relations to check with mcg.equal
and move scripts to replay with run_script.

Derivations are written on words (leftmost twist acts last), as they are
displayed; ``_WordChain`` translates each word-level move into the
1-based tuple index of the package convention.
"""
from __future__ import annotations

from dataclasses import dataclass

from .. import curves as cv
from .. import mcg
from ..factorization import Factorization, MoveScript, Report, run_script
from ..mcg import D, MappingClassWord
from .families import NamedFamily, UnsupportedParameter, build


@dataclass
class RelationCheck:
    name: str
    family: NamedFamily
    lhs: MappingClassWord
    rhs: MappingClassWord
    expected: bool = True

    def verify(self) -> bool:
        return mcg.equal(self.lhs, self.rhs)


@dataclass
class ScriptCheck:
    name: str
    family: NamedFamily
    start: Factorization
    script: MoveScript
    target: Factorization

    def verify(self, **kw) -> Report:
        return run_script(self.start, self.script, self.target, **kw)


def _boundary_product(page) -> MappingClassWord:
    return mcg.product(page, [D(cv.boundary_curve(page, i))
                              for i in range(len(page.boundary_components()))])


def _flip_first(w: MappingClassWord) -> MappingClassWord:
    return MappingClassWord(w.page, (w.atoms[0].inverse(),) + w.atoms[1:])


def lantern() -> RelationCheck:
    fam = build("thm-ope2", 1)
    c = fam.curves
    return RelationCheck("lantern", fam, D(c["V0"]) * D(c["V1^1"]) * D(c["V2"]),
                         _boundary_product(fam.page))


def star() -> RelationCheck:
    fam = build("vhm-3holed")
    c = fam.curves
    lhs = D(c["delta1"]) * D(c["delta2"]) * D(c["delta3"])
    rhs = (D(c["b"]) * D(c["a1"]) * D(c["a2"]) * D(c["a3"])) ** 3
    return RelationCheck("vhm-star", fam, lhs, rhs)


def chain_relation() -> RelationCheck:
    fam = build("vhm-4holed")
    c = fam.curves
    a = [c[f"a{i}"] for i in range(1, 5)]
    lhs = mcg.product(fam.page, [D(c[f"delta{i}"]) for i in range(1, 5)])
    rhs = (D(a[0]) * D(a[2]) * D(c["b"]) * D(a[1]) * D(a[3]) * D(c["b"])) ** 2
    return RelationCheck("vhm-chain-relation", fam, lhs, rhs)


def four_twists() -> RelationCheck:
    """phi~_1 = D^-2(a1..a4) D(delta1..4) against its four-twist form."""
    fam = build("vhm-4holed")
    c = fam.curves
    lhs = mcg.product(fam.page, [D(c[f"a{i}"], -1) ** 2 for i in range(1, 5)]
                      + [D(c[f"delta{i}"]) for i in range(1, 5)])
    return RelationCheck("vhm-four-twists", fam, lhs, fam.factorization("phi_tilde").total_monodromy())


def three_twists() -> RelationCheck:
    """T^-1 psi_1 T = D(T^-1 b) D(b) D(T b), psi_1 = D(delta1..3) D^-3(a1..3)."""
    fam = build("vhm-3holed")
    c = fam.curves
    T = D(c["a1"]) * D(c["a2"]) * D(c["a3"])
    psi = mcg.product(fam.page, [D(c[f"delta{i}"]) for i in range(1, 4)]
                      + [D(c[f"a{i}"], -1) ** 3 for i in range(1, 4)])
    return RelationCheck("vhm-three-twists", fam, T.inverse() * psi * T,
                         fam.factorization("psi").total_monodromy())


def vhm_hurwitz() -> ScriptCheck:
    fam = build("vhm-4holed")
    c = fam.curves
    script = MoveScript()
    script.add("hurwitz", "switch the last two twists: D(X)D(Y) -> D(D(X)Y)D(X)", i=1)
    script.add("replace_isotopic", "A13 D(b) A13^-1 A13 A24 (b) is isotopic to A24^-1 A13 (b)",
               i=2, curve=c["V1^2"])
    return ScriptCheck("vhm-hurwitz", fam, fam.factorization("phi_tilde"), script,
                       fam.factorization("phi"))


# ----------------------------------------------------------------------------
# The common-stabilization chain
# ----------------------------------------------------------------------------

class _WordChain:
    """A word of named twists and the tuple moves realizing word rewrites."""

    def __init__(self, fam: NamedFamily, word: list[str]):
        self.fam = fam
        self.letters = [fam.curves[n] for n in word]
        self.script = MoveScript()

    @property
    def n(self):
        return len(self.letters)

    def _index(self, p: int) -> int:
        # word positions p, p+1 (0-based) are tuple positions i+1, i (1-based)
        return self.n - 1 - p

    def forward(self, p: int, note: str = ""):
        """D(X) D(Y) -> D(D(X) Y) D(X) at word positions p, p+1."""
        x, y = self.letters[p], self.letters[p + 1]
        self.letters[p], self.letters[p + 1] = cv.twist(x, y, 1), x
        self.script.add("hurwitz", note, i=self._index(p))

    def inverse(self, p: int, note: str = ""):
        """D(X) D(Y) -> D(Y) D(D^-1(Y) X) at word positions p, p+1."""
        x, y = self.letters[p], self.letters[p + 1]
        self.letters[p], self.letters[p + 1] = y, cv.twist(y, x, -1)
        self.script.add("hurwitz_inverse", note, i=self._index(p))

    def pull_left(self, start: int, a: int, b: int, note: str):
        """Blocks L (length a at ``start``) and R (length b after it) become
        R L; R moves left and is transformed."""
        for r in range(b):
            for p in range(start + a + r - 1, start + r - 1, -1):
                self.forward(p, note)

    def push_right(self, start: int, a: int, b: int, note: str):
        """Blocks L R become R L; L moves right and is transformed."""
        for l in range(a - 1, -1, -1):
            for p in range(start + l, start + l + b):
                self.inverse(p, note)

    def rotate(self, k: int, note: str):
        """Move the last k letters of the word to the front."""
        self.letters = self.letters[-k:] + self.letters[:-k]
        self.script.add("cyclic", note, k=k)

    def expect(self, p: int, curve, note: str):
        """Checkpoint: letter p is the displayed curve."""
        self.letters[p] = curve
        self.script.add("replace_isotopic", note, i=self.n - p, curve=curve)


def gplus2_chain(g: int) -> ScriptCheck:
    """The derivation from psi^_g to phi^_g, block by block."""
    if not isinstance(g, int) or g < 1:
        raise UnsupportedParameter("the chain needs g >= 1")
    fam = build("stabilized-g", g)
    c = fam.curves
    ap = mcg.apply
    J = range(1, g + 1)

    def tw(prefix, sign=1):
        return mcg.product(fam.page, [D(c[f"{prefix}{j}"], sign) for j in J])

    word = ["U0"] + [f"U1^{j}" for j in J] + ["U2"] + [f"alpha_1,{j}" for j in J] \
        + [f"alpha_3,{j}" for j in J] + [f"alpha_4,{j}" for j in J]
    w = _WordChain(fam, word)
    beta, a2, a5, a3, a4 = tw("beta_"), tw("alpha_2,"), tw("alpha_5,"), tw("alpha_3,"), tw("alpha_4,")
    gamma = c["gamma"]

    # line 2: D(alpha1) D(alpha3) commute; U0, U2 written through gamma
    w.pull_left(g + 2, g, g, "D(alpha_1) D(alpha_3) -> D(alpha_3) D(alpha_1): disjoint curves")
    w.expect(0, ap(a2.inverse() * a5.inverse() * beta, gamma), "U0 = D^-1(alpha_2) D^-1(alpha_5) D(beta)(gamma)")
    w.expect(g + 1, ap(a2 * a5 * beta.inverse(), gamma), "U2 = D(alpha_2) D(alpha_5) D^-1(beta)(gamma)")
    # line 3: cyclic permutation brings D(alpha4) to the front
    w.rotate(g, "cyclic permutation: D(alpha_4) to the front")
    # line 4: D(alpha4) D(U0) and D(U2) D(alpha3)
    w.pull_left(0, g, 1, "D(alpha_4) D(U0) -> D(D(alpha_4) U0) D(alpha_4)")
    w.push_right(2 * g + 1, 1, g, "D(U2) D(alpha_3) -> D(alpha_3) D(D^-1(alpha_3) U2)")
    w.expect(0, c["V0"], "V0 = D(alpha_4)(U0)")
    w.expect(3 * g + 1, c["V2"], "V2 = D^-1(alpha_3)(U2)")
    # word: V0, alpha4, beta, alpha3, V2, alpha1
    w.pull_left(1, g, g, "D(alpha_4) D(beta) -> D(D(alpha_4)(beta)) D(alpha_4)")
    for j in J:
        w.expect(j, ap(D(c[f"alpha_4,{j}"]), c[f"beta_{j}"]), f"D(alpha_4,{j})(beta_{j})")
    # word: V0, D(a4)b, alpha4, alpha3, V2, alpha1
    w.pull_left(g + 1, g, g, "D(alpha_4) D(alpha_3) -> D(alpha_3) D(alpha_4): disjoint curves")
    w.push_right(1, g, g, "D(D(alpha_4)(beta)) D(alpha_3) -> D(alpha_3) D(D^-1(alpha_3) D(alpha_4)(beta))")
    for j in J:
        w.expect(g + j, c[f"V1^{2 * j - 1}"], f"V1^{2 * j - 1} = D^-1(alpha_3,{j}) D(alpha_4,{j})(beta_{j})")
    # word: V0, alpha3, V1odd, alpha4, V2, alpha1
    w.push_right(1, g, g, "D(alpha_3) D(V1^odd) -> D(V1^odd) D(D^-1(V1^odd)(alpha_3))")
    for j in J:
        w.expect(g + j, ap(D(c[f"alpha_4,{j}"]), c[f"beta_{j}"]),
                 f"D^-1(V1^{2 * j - 1})(alpha_3,{j}) is isotopic to D(alpha_4,{j})(beta_{j})")
    # word: V0, V1odd, D(a4)b, alpha4, V2, alpha1
    w.push_right(g + 1, g, g, "D(D(alpha_4)(beta)) D(alpha_4) -> D(alpha_4) D(beta)")
    for j in J:
        w.expect(2 * g + j, c[f"beta_{j}"], f"beta_{j}")
    w.push_right(g + 1, g, g, "D(alpha_4) D(beta) -> D(beta) D(D^-1(beta)(alpha_4))")
    for j in J:
        w.expect(2 * g + j, ap(D(c[f"beta_{j}"], -1), c[f"alpha_4,{j}"]), f"D^-1(beta_{j})(alpha_4,{j})")
    # word: V0, V1odd, beta, D^-1(beta)alpha4, V2, alpha1
    w.push_right(2 * g + 1, g, 1, "D(D^-1(beta)(alpha_4)) D(V2) -> D(V2) D(eta)")
    for j in J:
        w.expect(2 * g + 1 + j, c[f"eta_{j}"], f"eta_{j} = D^-1(V2) D^-1(beta_{j})(alpha_4,{j})")
    # V1^{2j} = beta_j; interleave the pairwise disjoint V1 curves
    for j in J:
        w.expect(g + j, c[f"V1^{2 * j}"], f"V1^{2 * j} = beta_{j}")
    _interleave(w, g)
    return ScriptCheck("gplus2-chain", fam, fam.factorization("psi_hat"), w.script,
                       fam.factorization("phi_hat"))


def identity_block(g: int) -> list[tuple[str, object, object]]:
    """The curve identities behind the chain as (label, curve, expected image).

    Each pair must be isotopic on the common page of genus g.  The V curves
    and beta_j are defined on that page by the short forms, so those rows hold
    by construction; the rows for U0, U2, the long forms and the last family
    are genuine checks.
    """
    if not isinstance(g, int) or g < 1:
        raise UnsupportedParameter("the identity block needs g >= 1")
    fam = build("stabilized-g", g)
    c = fam.curves
    ap = mcg.apply
    J = range(1, g + 1)

    def tw(prefix, sign=1):
        return mcg.product(fam.page, [D(c[f"{prefix}{j}"], sign) for j in J])

    beta, a2, a5, a3, a4 = tw("beta_"), tw("alpha_2,"), tw("alpha_5,"), tw("alpha_3,"), tw("alpha_4,")
    gamma = c["gamma"]
    u0_form = a2.inverse() * a5.inverse() * beta
    u2_form = a2 * a5 * beta.inverse()
    out = [("U0 = D^-1(alpha_2) D^-1(alpha_5) D(beta)(gamma)", c["U0"], ap(u0_form, gamma))]
    out += [(f"U1^{j} = beta_{j}", c[f"U1^{j}"], c[f"beta_{j}"]) for j in J]
    out.append(("U2 = D(alpha_2) D(alpha_5) D^-1(beta)(gamma)", c["U2"], ap(u2_form, gamma)))
    out.append(("V0 = D(alpha_4) D^-1(alpha_2) D^-1(alpha_5) D(beta)(gamma)", c["V0"], ap(a4 * u0_form, gamma)))
    out.append(("V0 = D(alpha_4)(U0)", c["V0"], ap(a4, c["U0"])))
    for j in J:
        out.append((f"V1^{2 * j - 1} = D^-1(alpha_3,{j}) D(alpha_4,{j})(beta_{j})", c[f"V1^{2 * j - 1}"],
                    ap(D(c[f"alpha_3,{j}"], -1) * D(c[f"alpha_4,{j}"]), c[f"beta_{j}"])))
        out.append((f"V1^{2 * j} = beta_{j}", c[f"V1^{2 * j}"], c[f"beta_{j}"]))
    out.append(("V2 = D^-1(alpha_3) D(alpha_2) D(alpha_5) D^-1(beta)(gamma)", c["V2"],
                ap(a3.inverse() * u2_form, gamma)))
    out.append(("V2 = D^-1(alpha_3)(U2)", c["V2"], ap(a3.inverse(), c["U2"])))
    for j in J:
        out.append((f"D^-1(V1^{2 * j - 1})(alpha_3,{j}) = D(alpha_4,{j})(beta_{j})",
                    ap(D(c[f"V1^{2 * j - 1}"], -1), c[f"alpha_3,{j}"]),
                    ap(D(c[f"alpha_4,{j}"]), c[f"beta_{j}"])))
    return out


def _interleave(w: _WordChain, g: int) -> None:
    """V0, V1^1, V1^3, ..., V1^2, V1^4, ... -> V0, V1^1, V1^2, V1^3, ...

    The V1 curves are pairwise disjoint, so every move is a transposition.
    """
    for j in range(1, g):
        # even letter V1^{2j} is at position g + j; its place is 2j
        for p in range(g + j - 1, 2 * j - 1, -1):
            w.forward(p, "disjoint V1 curves commute")


_RELATIONS = {
    "lantern": lantern,
    "vhm-star": star,
    "vhm-chain-relation": chain_relation,
    "vhm-four-twists": four_twists,
    "vhm-three-twists": three_twists,
}

_NEGATIVE = {
    "lantern-wrong-handedness": lantern,
    "star-wrong-handedness": star,
}

_SCRIPTS = {
    "vhm-hurwitz": lambda g=1: vhm_hurwitz(),
    "gplus2-chain": gplus2_chain,
}

PROOF_NAMES = tuple(_RELATIONS) + tuple(_NEGATIVE) + tuple(_SCRIPTS)


def proof_script(name: str, parameter: int = 1):
    """A RelationCheck or ScriptCheck for a named derivation.

    The ``*-wrong-handedness`` names are negative controls: the relation
    with the first twist of its right side inverted, which must fail.
    """
    if name in _RELATIONS:
        return _RELATIONS[name]()
    if name in _NEGATIVE:
        rel = _NEGATIVE[name]()
        return RelationCheck(name, rel.family, rel.lhs, _flip_first(rel.rhs), expected=False)
    if name in _SCRIPTS:
        return _SCRIPTS[name](parameter)
    raise KeyError(f"unknown derivation {name!r}")
