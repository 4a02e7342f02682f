"""Symbolic core: terms, atoms, clauses, programs, and substitutions.

Variables are identified by a (name, serial) pair.  Serial 0 belongs to
variables exactly as written in source text; every renamed clause instance
takes the next serial from a FreshSource, one tick per instance, so
instances are disjoint from source variables and from each other while
keeping their source spelling around for display.

Substitutions are stored fully resolved: no variable in the domain occurs
in any range term.  That makes application a single structural pass.
compose maintains the resolved form; mgu produces it directly.
"""

from __future__ import annotations

import sys
import weakref
from dataclasses import dataclass

# term equality, application, and unification all recurse on structure;
# derivations can legitimately build very deep terms
sys.setrecursionlimit(100000)

# Application never copies an unchanged branch, so terms share subtrees
# heavily.  Construction is interned: building a term that already exists
# returns the existing object, which turns deep equality into a pointer
# check almost everywhere.  Structural __eq__ stays as the fallback for
# objects that bypass construction (unpickling).
_INTERN: weakref.WeakValueDictionary = weakref.WeakValueDictionary()


@dataclass(frozen=True, eq=False)
class Variable:
    name: str
    serial: int = 0

    def __new__(cls, name: str = "", serial: int = 0):
        if not name:  # copy and pickle rebuild through __new__ with no args
            return object.__new__(cls)
        key = (Variable, name, serial)
        hit = _INTERN.get(key)
        if hit is None:
            hit = object.__new__(cls)
            _INTERN[key] = hit
        return hit

    def __hash__(self) -> int:
        return hash((self.name, self.serial))

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if other.__class__ is not Variable:
            return NotImplemented
        return self.name == other.name and self.serial == other.serial

    def sort_key(self) -> tuple[int, str]:
        return (self.serial, self.name)

    def __repr__(self) -> str:
        return self.name if self.serial == 0 else f"{self.name}_{self.serial}"


@dataclass(frozen=True, eq=False)
class Compound:
    functor: str
    args: tuple["Term", ...] = ()

    def __new__(cls, functor: str = "", args: tuple = ()):
        if not functor:  # copy and pickle rebuild through __new__ with no args
            return object.__new__(cls)
        key = (Compound, functor, args)
        hit = _INTERN.get(key)
        if hit is None:
            hit = object.__new__(cls)
            _INTERN[key] = hit
        return hit

    def __hash__(self) -> int:
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((self.functor, self.args))
            object.__setattr__(self, "_h", h)
        return h

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if other.__class__ is not Compound:
            return NotImplemented
        return _args_eq((self,), (other,))

    def __repr__(self) -> str:
        if not self.args:
            return self.functor
        return f"{self.functor}({','.join(map(repr, self.args))})"


Term = Variable | Compound


def _args_eq(xs: tuple, ys: tuple) -> bool:
    if len(xs) != len(ys):
        return False
    seen: set[tuple[int, int]] = set()
    stack = list(zip(xs, ys))
    while stack:
        a, b = stack.pop()
        if a is b:
            continue
        if isinstance(a, Variable):
            if not isinstance(b, Variable) or a.name != b.name or a.serial != b.serial:
                return False
            continue
        if not (isinstance(a, Compound) and isinstance(b, Compound)):
            return False
        if (
            a.functor != b.functor
            or len(a.args) != len(b.args)
            or hash(a) != hash(b)
        ):
            return False
        key = (id(a), id(b))
        if key not in seen:
            seen.add(key)
            stack.extend(zip(a.args, b.args))
    return True


def const(name: str) -> Compound:
    return Compound(name, ())


@dataclass(frozen=True, eq=False)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()

    def __new__(cls, predicate: str = "", args: tuple = ()):
        if not predicate:  # copy and pickle rebuild through __new__ with no args
            return object.__new__(cls)
        key = (Atom, predicate, args)
        hit = _INTERN.get(key)
        if hit is None:
            hit = object.__new__(cls)
            _INTERN[key] = hit
        return hit

    @property
    def indicator(self) -> tuple[str, int]:
        return (self.predicate, len(self.args))

    def __hash__(self) -> int:
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((self.predicate, self.args))
            object.__setattr__(self, "_h", h)
        return h

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if other.__class__ is not Atom:
            return NotImplemented
        if self.predicate != other.predicate or hash(self) != hash(other):
            return False
        return _args_eq(self.args, other.args)

    def __repr__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(map(repr, self.args))})"


TRUE = Atom("true")
FAIL = Atom("fail")
RTRACE = Atom("rtrace")

RESERVED_INDICATORS = {("true", 0), ("fail", 0), ("ret", 1)}


def ret_marker(a: Atom) -> Atom:
    """Wrap an atom as the goal that marks completion of its clause body."""
    return Atom("ret", (Compound(a.predicate, a.args),))


def is_ret(a: Atom) -> bool:
    return a.predicate == "ret" and len(a.args) == 1


def ret_atom(marker: Atom) -> Atom:
    """Recover the atom stored inside a completion marker."""
    inner = marker.args[0]
    assert isinstance(inner, Compound), "malformed ret marker"
    return Atom(inner.functor, inner.args)


@dataclass(frozen=True)
class Clause:
    label: str
    head: Atom
    body: tuple[Atom, ...] = ()

    def __repr__(self) -> str:
        if not self.body:
            return f"{self.label}: {self.head!r}."
        return f"{self.label}: {self.head!r} :- {','.join(map(repr, self.body))}."


class Program:
    """An ordered collection of labeled clauses.

    Clause order is source order; that order fixes which alternatives a
    goal sees and in which sequence.  Labels must be unique.
    """

    __slots__ = ("clauses", "_by_label")

    def __init__(self, clauses):
        self.clauses: tuple[Clause, ...] = tuple(clauses)
        self._by_label = {c.label: c for c in self.clauses}
        if len(self._by_label) != len(self.clauses):
            raise ValueError("duplicate clause label")

    def clause(self, label: str) -> Clause:
        return self._by_label[label]

    def __len__(self) -> int:
        return len(self.clauses)

    def __iter__(self):
        return iter(self.clauses)

    def __eq__(self, other) -> bool:
        return isinstance(other, Program) and self.clauses == other.clauses

    def __hash__(self) -> int:
        return hash(self.clauses)

    def __repr__(self) -> str:
        return "Program[" + " ".join(repr(c) for c in self.clauses) + "]"


@dataclass(frozen=True)
class FreshSource:
    """Monotone counter backing clause renaming.

    The counter equals the number of clause instances issued so far.
    Snapshotting it (it is just an int) lets a backward step restore the
    renaming state exactly.
    """

    counter: int = 0

    def tick(self) -> "FreshSource":
        return FreshSource(self.counter + 1)


class Substitution:
    """Immutable variable-to-term mapping; identity bindings are dropped.

    Engine-produced substitutions are fully resolved, so a single pass of
    apply() reaches the final instance.  Iteration order follows insertion
    order, which callers exploit for display.
    """

    __slots__ = ("_map",)

    def __init__(self, bindings=None):
        m: dict[Variable, Term] = {}
        if bindings:
            items = bindings.items() if hasattr(bindings, "items") else bindings
            for v, t in items:
                if t != v:
                    m[v] = t
        object.__setattr__(self, "_map", m)

    def get(self, v: Variable, default=None):
        return self._map.get(v, default)

    def items(self):
        return self._map.items()

    def domain(self):
        return self._map.keys()

    def __contains__(self, v: Variable) -> bool:
        return v in self._map

    def __len__(self) -> int:
        return len(self._map)

    def __bool__(self) -> bool:
        return bool(self._map)

    def __eq__(self, other) -> bool:
        if isinstance(other, Substitution):
            return self._map == other._map
        if isinstance(other, dict):
            return self._map == {v: t for v, t in other.items() if t != v}
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._map.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{v!r}/{t!r}" for v, t in self._map.items())
        return "{" + inner + "}"


EMPTY = Substitution()


def apply(obj, theta, _memo=None):
    """Instantiate a term, atom, clause, or sequence under a substitution.

    theta must be in resolved form; one structural pass then yields the
    fixed point.  Identical subterm objects map to identical results, so
    shared structure stays shared and the pass is linear in distinct
    nodes.  Callers instantiating several objects under the same theta may
    pass one _memo dict through to keep sharing across those calls.
    """
    if not theta:
        return obj
    if _memo is None:
        _memo = {}
    return _apply(obj, theta, _memo)


def _apply(obj, theta, memo):
    if isinstance(obj, Variable):
        return theta.get(obj, obj)
    key = id(obj)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(obj, Compound):
        if not obj.args:
            res = obj
        else:
            args = tuple(_apply(t, theta, memo) for t in obj.args)
            res = obj if args == obj.args else Compound(obj.functor, args)
    elif isinstance(obj, Atom):
        if not obj.args:
            res = obj
        else:
            args = tuple(_apply(t, theta, memo) for t in obj.args)
            res = obj if args == obj.args else Atom(obj.predicate, args)
    elif isinstance(obj, Clause):
        res = Clause(
            obj.label, _apply(obj.head, theta, memo), _apply(obj.body, theta, memo)
        )
    elif isinstance(obj, tuple):
        res = tuple(_apply(x, theta, memo) for x in obj)
    elif isinstance(obj, list):
        res = [_apply(x, theta, memo) for x in obj]
    else:
        raise TypeError(f"cannot apply a substitution to {type(obj).__name__}")
    memo[key] = res
    return res


def iter_vars(obj):
    """Yield variables in first-reached order, depth first left to right.

    Shared subterm objects are walked once, so the traversal is linear in
    distinct nodes; a repeated variable still shows up at every fresh path.
    """
    seen: set[int] = set()
    stack = [obj]
    while stack:
        x = stack.pop()
        if isinstance(x, Variable):
            yield x
        elif isinstance(x, (Compound, Atom)):
            if x.args and id(x) not in seen:
                seen.add(id(x))
                stack.extend(reversed(x.args))
        elif isinstance(x, Clause):
            stack.append(x.body)
            stack.append(x.head)
        elif isinstance(x, (tuple, list)):
            stack.extend(reversed(x))
        elif isinstance(x, Substitution):
            for v, t in reversed(list(x.items())):
                stack.append(t)
                stack.append(v)
        else:
            raise TypeError(f"cannot collect variables from {type(x).__name__}")


def vars_of(obj) -> set[Variable]:
    return set(iter_vars(obj))


def max_serial(obj) -> int:
    return max((v.serial for v in iter_vars(obj)), default=0)


def occurs(v: Variable, t) -> bool:
    return any(v == w for w in iter_vars(t))


class _Settings:
    __slots__ = ("occurs_check",)

    def __init__(self):
        self.occurs_check = True


# Process-wide switches.  The CLI flips occurs_check off under
# --no-occurs-check; everything else leaves it alone.
settings = _Settings()


def mgu(a, b, occurs_check: bool | None = None):
    """Most general unifier of two terms or two atoms.

    Returns a resolved Substitution, or None when the inputs do not unify
    (functor or arity clash, distinct predicates, or an occurs-check hit).
    Variable-variable conflicts bind the younger variable (larger serial,
    ties broken by name) to the older one, so user-written names survive
    instantiation.
    """
    if occurs_check is None:
        occurs_check = settings.occurs_check
    if isinstance(a, Atom) or isinstance(b, Atom):
        if not (isinstance(a, Atom) and isinstance(b, Atom)):
            return None
        if a.predicate != b.predicate or len(a.args) != len(b.args):
            return None
        work = list(zip(reversed(a.args), reversed(b.args)))
    else:
        work = [(a, b)]

    sigma: dict[Variable, Term] = {}

    def bind(v: Variable, t: Term) -> bool:
        if occurs_check and occurs(v, t):
            return False
        one = Substitution({v: t})
        memo: dict[int, Term] = {}
        for x in sigma:
            sigma[x] = apply(sigma[x], one, memo)
        sigma[v] = t
        return True

    while work:
        s, t = work.pop()
        if s is t:
            continue
        s = apply(s, sigma) if sigma else s
        t = apply(t, sigma) if sigma else t
        if s == t:
            continue
        if isinstance(s, Variable) and isinstance(t, Variable):
            if t.sort_key() < s.sort_key():
                s, t = t, s
            # s is now the older variable; point the younger one at it
            if not bind(t, s):
                return None
        elif isinstance(s, Variable):
            if not bind(s, t):
                return None
        elif isinstance(t, Variable):
            if not bind(t, s):
                return None
        else:
            if s.functor != t.functor or len(s.args) != len(t.args):
                return None
            work.extend(zip(reversed(s.args), reversed(t.args)))

    # sigma was kept resolved throughout; re-wrap to drop any identities
    return Substitution(sigma)


def compose(theta: Substitution, sigma: Substitution) -> Substitution:
    """Sequential composition: applying the result equals applying theta
    then sigma.  sigma is folded into theta's range terms eagerly, so the
    result stays in resolved form whenever the inputs are."""
    if not sigma:
        return theta
    if not theta:
        return sigma
    out: dict[Variable, Term] = {}
    memo: dict[int, Term] = {}  # keeps structure shared across range terms
    for v, t in theta.items():
        out[v] = apply(t, sigma, memo)
    for v, t in sigma.items():
        if v not in out:
            out[v] = t
    return Substitution(out)


def restrict(theta: Substitution, vs) -> Substitution:
    """Keep only the bindings whose variable is in vs."""
    vs = set(vs)
    return Substitution({v: t for v, t in theta.items() if v in vs})


def rename_apart(c: Clause, fs: FreshSource) -> tuple[Clause, FreshSource]:
    """Issue a fresh instance of a clause.

    Every variable keeps its name and receives serial counter+1; the
    source ticks once per instance.  Distinct variables must map to
    distinct variables, which holds because parsed clauses carry
    pairwise-distinct (name, serial) pairs with unique names.
    """
    serial = fs.counter + 1
    mapping: dict[Variable, Variable] = {}

    def ren(t):
        if isinstance(t, Variable):
            r = mapping.get(t)
            if r is None:
                r = Variable(t.name, serial)
                mapping[t] = r
            return r
        if isinstance(t, Compound):
            return Compound(t.functor, tuple(ren(x) for x in t.args))
        raise TypeError(type(t).__name__)

    def ren_atom(a: Atom) -> Atom:
        return Atom(a.predicate, tuple(ren(x) for x in a.args))

    renamed = Clause(c.label, ren_atom(c.head), tuple(ren_atom(a) for a in c.body))
    assert len(set(mapping.values())) == len(mapping), "renaming collapsed variables"
    return renamed, FreshSource(serial)


def variant_eq(a, b) -> bool:
    """Equality up to a bijective renaming of variables."""
    fwd: dict[Variable, Variable] = {}
    bwd: dict[Variable, Variable] = {}

    def walk(x, y) -> bool:
        if isinstance(x, Variable) and isinstance(y, Variable):
            if x in fwd:
                return fwd[x] == y
            if y in bwd:
                return False
            fwd[x] = y
            bwd[y] = x
            return True
        if isinstance(x, Compound) and isinstance(y, Compound):
            return (
                x.functor == y.functor
                and len(x.args) == len(y.args)
                and all(walk(s, t) for s, t in zip(x.args, y.args))
            )
        if isinstance(x, Atom) and isinstance(y, Atom):
            return (
                x.predicate == y.predicate
                and len(x.args) == len(y.args)
                and all(walk(s, t) for s, t in zip(x.args, y.args))
            )
        if isinstance(x, Clause) and isinstance(y, Clause):
            return (
                x.label == y.label
                and walk(x.head, y.head)
                and walk(x.body, y.body)
            )
        if isinstance(x, (tuple, list)) and isinstance(y, (tuple, list)):
            return len(x) == len(y) and all(walk(s, t) for s, t in zip(x, y))
        return False

    return walk(a, b)
