"""Simply typed lambda terms: syntax, typing, substitution, and matching.

Terms are immutable trees.  Positions address subterms with tuples of child
indices: 1 is the function part of an application or the body of a lambda,
2 is the argument part.  Alpha-equivalence is decided through a canonical
renaming of bound variables, so terms can be used as dictionary keys modulo
alpha by canonicalizing first.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Mapping

from hodp.errors import InvalidPositionError, TypeCheckError

# ----------------------------------------------------------------- types


@dataclass(frozen=True)
class Base:
    name: str


@dataclass(frozen=True)
class Arrow:
    dom: "Type"
    cod: "Type"


Type = Base | Arrow


def arrow(args: Iterable["Type"], out: "Type") -> "Type":
    """Right-nested function type taking args and returning out."""
    t = out
    for a in reversed(tuple(args)):
        t = Arrow(a, t)
    return t


def flatten_type(t: Type) -> tuple[tuple[Type, ...], Base]:
    """Split a type into its argument list and base result."""
    args = []
    while isinstance(t, Arrow):
        args.append(t.dom)
        t = t.cod
    return tuple(args), t


def show_type(t: Type) -> str:
    if isinstance(t, Base):
        return t.name
    dom = show_type(t.dom)
    if isinstance(t.dom, Arrow):
        dom = f"({dom})"
    return f"{dom} -> {show_type(t.cod)}"


# ----------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str
    type: Type


@dataclass(frozen=True)
class Sym:
    name: str
    type: Type


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Lam:
    var: Var
    body: "Term"


Term = Var | Sym | App | Lam

Position = tuple[int, ...]


def show_position(p: Position) -> str:
    return ".".join(str(i) for i in p) if p else "ε"


def show_term(t: Term) -> str:
    if isinstance(t, (Var, Sym)):
        return t.name
    if isinstance(t, Lam):
        return f"\\{t.var.name}:{show_type(t.var.type)}. {show_term(t.body)}"
    head = show_term(t.fun)
    if isinstance(t.fun, Lam):
        head = f"({head})"
    arg = show_term(t.arg)
    if isinstance(t.arg, (App, Lam)):
        arg = f"({arg})"
    return f"{head} {arg}"


def term_size(t: Term) -> int:
    if isinstance(t, (Var, Sym)):
        return 1
    if isinstance(t, App):
        return 1 + term_size(t.fun) + term_size(t.arg)
    return 1 + term_size(t.body)


@functools.lru_cache(maxsize=None)
def type_of(t: Term) -> Type:
    """Type of a term; raises TypeCheckError if an application does not fit."""
    if isinstance(t, (Var, Sym)):
        return t.type
    if isinstance(t, App):
        fun = type_of(t.fun)
        if not isinstance(fun, Arrow):
            raise TypeCheckError(
                f"cannot apply {show_term(t.fun)} : {show_type(fun)}, not a function"
            )
        arg = type_of(t.arg)
        if fun.dom != arg:
            raise TypeCheckError(
                f"argument {show_term(t.arg)} : {show_type(arg)} does not fit "
                f"{show_term(t.fun)} : {show_type(fun)}"
            )
        return fun.cod
    return Arrow(t.var.type, type_of(t.body))


@functools.lru_cache(maxsize=None)
def free_vars(t: Term) -> frozenset[Var]:
    if isinstance(t, Var):
        return frozenset((t,))
    if isinstance(t, Sym):
        return frozenset()
    if isinstance(t, App):
        return free_vars(t.fun) | free_vars(t.arg)
    return free_vars(t.body) - {t.var}


def spine(t: Term) -> tuple[Term, tuple[Term, ...]]:
    """Head and argument list of a nested application."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    return t, tuple(reversed(args))


def make_app(head: Term, args: Iterable[Term]) -> Term:
    t = head
    for a in args:
        t = App(t, a)
    return t


# -------------------------------------------------------------- positions


def positions(t: Term) -> list[tuple[Position, Term]]:
    """All positions of t with their subterms, in preorder (lexicographic)."""
    out: list[tuple[Position, Term]] = []

    def walk(u: Term, p: Position) -> None:
        out.append((p, u))
        if isinstance(u, App):
            walk(u.fun, p + (1,))
            walk(u.arg, p + (2,))
        elif isinstance(u, Lam):
            walk(u.body, p + (1,))

    walk(t, ())
    return out


def subterm_at(t: Term, pos: Position) -> Term:
    for i in pos:
        if isinstance(t, App) and i == 1:
            t = t.fun
        elif isinstance(t, App) and i == 2:
            t = t.arg
        elif isinstance(t, Lam) and i == 1:
            t = t.body
        else:
            raise InvalidPositionError(f"no position {show_position(pos)} in term")
    return t


def replace_at(t: Term, pos: Position, new: Term) -> Term:
    """Replace the subterm at pos.  Binders above pos deliberately keep
    capturing: the replacement is meant to be built from the old subterm."""
    if not pos:
        return new
    i = pos[0]
    if isinstance(t, App) and i == 1:
        return App(replace_at(t.fun, pos[1:], new), t.arg)
    if isinstance(t, App) and i == 2:
        return App(t.fun, replace_at(t.arg, pos[1:], new))
    if isinstance(t, Lam) and i == 1:
        return Lam(t.var, replace_at(t.body, pos[1:], new))
    raise InvalidPositionError(f"no position {show_position(pos)} in term")


def binders_above(t: Term, pos: Position) -> dict[int, Var]:
    """Binders crossed on the way to pos, keyed by their depth from the root.

    Depth counts all binders passed so far, matching the numbering used by
    alpha_canonical.
    """
    out: dict[int, Var] = {}
    depth = 0
    for i in pos:
        if isinstance(t, Lam):
            if i != 1:
                raise InvalidPositionError(f"no position {show_position(pos)} in term")
            out[depth] = t.var
            depth += 1
            t = t.body
        elif isinstance(t, App) and i in (1, 2):
            t = t.fun if i == 1 else t.arg
        else:
            raise InvalidPositionError(f"no position {show_position(pos)} in term")
    return out


# ---------------------------------------------------- alpha equivalence


@functools.lru_cache(maxsize=None)
def alpha_canonical(t: Term) -> Term:
    """Rename every binder to a depth-indexed name.

    The marker character cannot appear in parsed identifiers, so canonical
    binder names never collide with free variables.
    """
    return _canon(t, {}, 0)


def _canon(t: Term, env: dict[Var, Var], depth: int) -> Term:
    if isinstance(t, Var):
        return env.get(t, t)
    if isinstance(t, Sym):
        return t
    if isinstance(t, App):
        return App(_canon(t.fun, env, depth), _canon(t.arg, env, depth))
    v = Var(f"!{depth}", t.var.type)
    return Lam(v, _canon(t.body, {**env, t.var: v}, depth + 1))


def alpha_eq(s: Term, t: Term) -> bool:
    return alpha_canonical(s) == alpha_canonical(t)


def fresh_var(name: str, typ: Type, avoid: Iterable[str]) -> Var:
    taken = set(avoid)
    candidate = name + "'"
    i = 1
    while candidate in taken:
        i += 1
        candidate = f"{name}'{i}"
    return Var(candidate, typ)


# ------------------------------------------------------------ substitution


def apply_subst(t: Term, subst: Mapping[Var, Term]) -> Term:
    """Capture-avoiding substitution of free variables."""
    if not subst:
        return t
    if isinstance(t, Var):
        return subst.get(t, t)
    if isinstance(t, Sym):
        return t
    if isinstance(t, App):
        return App(apply_subst(t.fun, subst), apply_subst(t.arg, subst))
    live = {v: u for v, u in subst.items() if v != t.var and v in free_vars(t.body)}
    if not live:
        return t
    var, body = t.var, t.body
    if any(var in free_vars(u) for u in live.values()):
        avoid = {w.name for u in live.values() for w in free_vars(u)}
        avoid |= {w.name for w in free_vars(body)}
        var = fresh_var(t.var.name, t.var.type, avoid)
        body = apply_subst(body, {t.var: var})
    return Lam(var, apply_subst(body, live))


# ------------------------------------------------------------------- beta


def beta_contract(redex: App) -> Term:
    lam = redex.fun
    assert isinstance(lam, Lam)
    return apply_subst(lam.body, {lam.var: redex.arg})


def beta_reducts(t: Term) -> list[tuple[Position, Term]]:
    """One-step beta reducts with the contracted position, preorder."""
    out = []
    for p, sub in positions(t):
        if isinstance(sub, App) and isinstance(sub.fun, Lam):
            out.append((p, replace_at(t, p, beta_contract(sub))))
    return out


def beta_normalize(t: Term, max_steps: int = 100_000) -> Term:
    """Leftmost-outermost normalization.  Terminates on well-typed terms."""
    for _ in range(max_steps):
        reducts = beta_reducts(t)
        if not reducts:
            return t
        t = reducts[0][1]
    raise TypeCheckError("no beta normal form within the step budget")


# --------------------------------------------------------------- matching


def match_pattern(pattern: Term, subject: Term) -> dict[Var, Term] | None:
    """Syntactic match of subject against pattern, modulo alpha.

    Free pattern variables bind subterms of the subject; variables of the
    subject bound above the matched occurrence may appear in those bindings,
    but variables bound inside the pattern may not escape into them.
    Returns the binding, or None if the subject does not match.
    """
    binding: dict[Var, Term] = {}

    def go(pat: Term, sub: Term, env: dict[Var, Var]) -> bool:
        if isinstance(pat, Var):
            if pat in env:
                return isinstance(sub, Var) and sub == env[pat]
            bound = binding.get(pat)
            if bound is not None:
                return alpha_eq(bound, sub)
            if free_vars(sub) & set(env.values()):
                return False
            if type_of(sub) != pat.type:
                return False
            binding[pat] = sub
            return True
        if isinstance(pat, Sym):
            return isinstance(sub, Sym) and pat == sub
        if isinstance(pat, App):
            return (
                isinstance(sub, App)
                and go(pat.fun, sub.fun, env)
                and go(pat.arg, sub.arg, env)
            )
        if not isinstance(sub, Lam) or pat.var.type != sub.var.type:
            return False
        return go(pat.body, sub.body, {**env, pat.var: sub.var})

    return binding if go(pattern, subject, {}) else None
