"""Derivation machinery: implication graphs, propagation, and solvers.

Two deterministic inference fragments live here side by side, and keeping
them separate is the point of the package:

* the *graph* fragment (``clause_to_implications`` / ``propagate_closure``)
  works on the implication edges that width-<=2 clauses admit, by pure
  reachability from a seed set of literals;
* the *clause* fragment (``unit_propagate``) works directly on clauses of
  any width, forcing the last unfalsified literal of an otherwise-falsified
  clause.

For formulas whose clauses all have width <= 2 the two fragments compute the
same forced sets from the same seeds (that comparison is run, not assumed,
by the analysis layer); a width->=3 clause has no implication form at all,
which ``clause_to_implications`` reports as WideClauseError.

``dpll_solve`` is a complete backtracking search, unit propagation first.
Its trace distinguishes how each assignment was obtained: a forcing through
a width-<=2 clause is a direct implication step and appears as a single
propagation node, while a forcing through a wider clause has no implication
form and is recorded the way the search actually justifies it, as a
refutation pair: a conflict leaf for the excluded value followed by the
forced branch.  That is what makes backtrack counters an observable
difference between narrow and wide formulas instead of an informal claim.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .formula import Assignment, Clause, CnfFormula, satisfies


class WideClauseError(ValueError):
    """A width->=3 clause was handed to the implication-graph fragment.

    No implication form exists for such a clause (knowing one literal false
    still leaves a disjunction, not a consequent), so the conversion is
    undefined rather than approximate.  The offending clause rides along as
    evidence.
    """

    def __init__(self, cl: Clause):
        self.clause = cl
        super().__init__(
            f"clause {list(cl.literals)} has width {cl.width}; "
            "only width-<=2 clauses have an implication form"
        )


def _lit_key(lit: int) -> tuple[int, bool]:
    # canonical literal order: by variable, positive polarity first
    return (abs(lit), lit < 0)


def lit_text(lit: int) -> str:
    return f"x{lit}" if lit > 0 else f"~x{-lit}"


@dataclass(frozen=True)
class Implication:
    antecedent: int
    consequent: int


def clause_to_implications(cl: Clause) -> tuple[Implication, ...]:
    """Implication form of a narrow clause.

    (a | b) gives ~a => b and ~b => a; a unit clause (a) gives the forcing
    edge ~a => a.  Width >= 3 raises WideClauseError.
    """
    if cl.width == 1:
        (a,) = cl.literals
        return (Implication(-a, a),)
    if cl.width == 2:
        a, b = cl.literals
        return (Implication(-a, b), Implication(-b, a))
    raise WideClauseError(cl)


class ImplicationGraph:
    """Directed graph over all 2n literals of variables 1..n.

    The edge set is closed under contraposition at construction: inserting
    u => v also inserts ~v => ~u, so the invariant holds no matter how the
    graph was assembled.  Isolated literals are still nodes.
    """

    def __init__(self, variable_count: int, edges: Iterable[Implication] = ()):
        if variable_count < 0:
            raise ValueError("variable_count must be >= 0")
        self.variable_count = variable_count
        closed: set[tuple[int, int]] = set()
        for e in edges:
            for lit in (e.antecedent, e.consequent):
                if lit == 0 or abs(lit) > variable_count:
                    raise ValueError(f"literal {lit} outside variable range")
            closed.add((e.antecedent, e.consequent))
            closed.add((-e.consequent, -e.antecedent))
        self.edges = frozenset(Implication(u, v) for u, v in closed)
        adj: dict[int, list[int]] = {}
        for u, v in closed:
            adj.setdefault(u, []).append(v)
        self._adj = {u: tuple(sorted(vs, key=_lit_key)) for u, vs in adj.items()}

    def successors(self, lit: int) -> tuple[int, ...]:
        return self._adj.get(lit, ())

    def literals(self) -> list[int]:
        out: list[int] = []
        for v in range(1, self.variable_count + 1):
            out.extend((v, -v))
        return out

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ImplicationGraph)
            and self.variable_count == other.variable_count
            and self.edges == other.edges
        )

    def __repr__(self) -> str:
        return f"ImplicationGraph(n={self.variable_count}, edges={len(self.edges)})"

    def to_json_dict(self) -> dict:
        pairs = sorted(
            ((e.antecedent, e.consequent) for e in self.edges),
            key=lambda p: (_lit_key(p[0]), _lit_key(p[1])),
        )
        return {
            "variableCount": self.variable_count,
            "edges": [{"from": u, "to": v} for u, v in pairs],
        }


def build_implication_graph(f: CnfFormula) -> ImplicationGraph:
    """Union of the implication forms of every clause (all widths <= 2)."""
    edges: list[Implication] = []
    for cl in f.clauses:
        edges.extend(clause_to_implications(cl))
    return ImplicationGraph(f.variable_count, edges)


@dataclass(frozen=True)
class PropagationStep:
    source: int
    rule: str
    literal: int


@dataclass(frozen=True)
class PropagationClosure:
    """Forced-literal closure of a seed, with its derivation steps.

    ``conflict`` names the first variable observed forced in both
    polarities (graph fragment) or the variable of a falsified clause's
    last literal (clause fragment); None means no contradiction.
    """

    seed: frozenset[int]
    forced: frozenset[int]
    steps: tuple[PropagationStep, ...]
    conflict: int | None

    def to_json_dict(self) -> dict:
        return {
            "seed": sorted(self.seed, key=_lit_key),
            "forced": sorted(self.forced, key=_lit_key),
            "steps": [
                {"from": s.source, "rule": s.rule, "to": s.literal}
                for s in self.steps
            ],
            "conflict": self.conflict,
        }


def propagate_closure(g: ImplicationGraph, seed: Iterable[int]) -> PropagationClosure:
    """Reachability closure of ``seed`` over the implication edges.

    Breadth-first from the seed literals in canonical order, so the step
    list is deterministic.  The closure always runs to completion; the
    conflict marker is set as soon as some variable is reached in both
    polarities, taking the empty seed to the empty closure (a forcing edge
    ~a => a fires only once ~a is actually reached).
    """
    seed_set = frozenset(seed)
    for lit in seed_set:
        if lit == 0 or abs(lit) > g.variable_count:
            raise ValueError(f"seed literal {lit} outside variable range")
    forced: set[int] = set(seed_set)
    conflict: int | None = None
    for lit in sorted(seed_set, key=_lit_key):
        if -lit in seed_set:
            conflict = abs(lit)
            break
    steps: list[PropagationStep] = []
    queue = deque(sorted(seed_set, key=_lit_key))
    while queue:
        u = queue.popleft()
        for v in g.successors(u):
            if v in forced:
                continue
            forced.add(v)
            steps.append(PropagationStep(u, "implication", v))
            if conflict is None and -v in forced:
                conflict = abs(v)
            queue.append(v)
    return PropagationClosure(seed_set, frozenset(forced), tuple(steps), conflict)


def unit_propagate(f: CnfFormula, assignment: Assignment) -> PropagationClosure:
    """Deterministic clause-level closure of a partial assignment.

    Repeatedly: a clause with every literal false except one unassigned
    forces that literal; an original unit clause forces its literal
    unconditionally.  Stops at the first falsified clause (conflict).
    Clauses are scanned in formula order, so steps are deterministic.
    """
    for var in assignment:
        if var < 1 or var > f.variable_count:
            raise ValueError(f"assigned variable {var} outside variable range")
    seed_set = frozenset(v if val else -v for v, val in assignment.items())
    forced: set[int] = set(seed_set)
    order: dict[int, int] = {lit: i for i, lit in enumerate(sorted(seed_set, key=_lit_key))}
    steps: list[PropagationStep] = []
    conflict: int | None = None
    progress = True
    while progress and conflict is None:
        progress = False
        for cl in f.clauses:
            if any(lit in forced for lit in cl):
                continue  # satisfied
            unassigned = [lit for lit in cl if -lit not in forced]
            if not unassigned:
                # falsified: the literal forced most recently is the clash
                trigger = max(cl.literals, key=lambda l: order[-l])
                conflict = abs(trigger)
                break
            if len(unassigned) == 1:
                forced_lit = unassigned[0]
                false_lits = [lit for lit in cl if lit != forced_lit]
                if false_lits:
                    source = -max(false_lits, key=lambda l: order[-l])
                else:
                    source = forced_lit  # original unit clause, self-evident
                forced.add(forced_lit)
                order[forced_lit] = len(order)
                steps.append(PropagationStep(source, "unit", forced_lit))
                progress = True
    return PropagationClosure(seed_set, frozenset(forced), tuple(steps), conflict)


@dataclass(frozen=True)
class SolveResult:
    satisfiable: bool
    model: Assignment | None = None
    witness_variable: int | None = None

    def to_json_dict(self) -> dict:
        # assignments serialize as true-literal lists sorted by variable
        return {
            "result": "SAT" if self.satisfiable else "UNSAT",
            "model": None
            if self.model is None
            else [v if self.model[v] else -v for v in sorted(self.model)],
            "witnessVariable": self.witness_variable,
        }


def _tarjan_components(nodes: Sequence[int], graph: ImplicationGraph) -> dict[int, int]:
    """Strongly connected components, numbered in emission order.

    Tarjan emits components sinks-first (reverse topological order of the
    condensation), and the iteration order over ``nodes`` plus sorted
    successor lists make the numbering deterministic.
    """
    index_of: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comp_of: dict[int, int] = {}
    next_index = 0
    next_comp = 0
    for root in nodes:
        if root in index_of:
            continue
        index_of[root] = low[root] = next_index
        next_index += 1
        stack.append(root)
        on_stack.add(root)
        call: list[tuple[int, int]] = [(root, 0)]
        while call:
            node, cursor = call[-1]
            succ = graph.successors(node)
            pushed = False
            while cursor < len(succ):
                w = succ[cursor]
                cursor += 1
                if w not in index_of:
                    call[-1] = (node, cursor)
                    index_of[w] = low[w] = next_index
                    next_index += 1
                    stack.append(w)
                    on_stack.add(w)
                    call.append((w, 0))
                    pushed = True
                    break
                if w in on_stack and index_of[w] < low[node]:
                    low[node] = index_of[w]
            if pushed:
                continue
            call.pop()
            if call:
                parent = call[-1][0]
                if low[node] < low[parent]:
                    low[parent] = low[node]
            if low[node] == index_of[node]:
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp_of[w] = next_comp
                    if w == node:
                        break
                next_comp += 1
    return comp_of


def solve_2sat(f: CnfFormula) -> SolveResult:
    """Satisfiability of a width-<=2 formula via strongly connected components.

    Unsatisfiable exactly when some variable shares a component with its
    negation; that variable (lowest index) is returned as the witness.
    Otherwise each variable is set true iff its positive literal's component
    is emitted earlier (Tarjan emits sinks first, so earlier emission means
    later in topological order of the condensation), and the model is
    verified against every clause before it is returned.
    """
    g = build_implication_graph(f)  # raises WideClauseError on width >= 3
    comp = _tarjan_components(g.literals(), g)
    for v in range(1, f.variable_count + 1):
        if comp[v] == comp[-v]:
            return SolveResult(False, None, witness_variable=v)
    model = {v: comp[v] < comp[-v] for v in range(1, f.variable_count + 1)}
    if not satisfies(f, model):
        raise RuntimeError("2sat model extraction produced a non-model")
    return SolveResult(True, model, None)


# ---------------------------------------------------------------------------
# DPLL with derivation traces
# ---------------------------------------------------------------------------

HEURISTICS = ("lowest-index", "most-occurrences")


@dataclass
class TraceNode:
    """One assignment event in the search tree.

    kind is "root" for the start marker, "decision" for a heuristic choice,
    "propagation" for a forcing through a width-<=2 clause, "refutation" for
    the probed-and-excluded value of a width->=3 forcing.  leaf marks the
    node as a SAT or UNSAT endpoint of its branch.
    """

    kind: str
    variable: int | None
    value: bool | None
    leaf: str | None = None
    children: list["TraceNode"] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "variable": self.variable,
            "value": self.value,
            "leaf": self.leaf,
            "children": [c.to_json_dict() for c in self.children],
        }


@dataclass
class DerivationTrace:
    """Search tree of one dpll_solve run plus its effort counters.

    branch_count counts branch points explored both ways: decisions whose
    second value was tried, and refutation pairs (the excluded value *is*
    the first try).  backtrack_count counts conflict leaves that the search
    retreated from (every conflict except a final one that ends an UNSAT
    run), so branch_count >= backtrack_count always holds.
    """

    root: TraceNode
    result: SolveResult
    heuristic: str
    branch_count: int
    backtrack_count: int
    free_variables: tuple[int, ...]

    def node_count(self) -> int:
        count = 0
        todo = [self.root]
        while todo:
            node = todo.pop()
            count += 1
            todo.extend(node.children)
        return count

    def depth(self) -> int:
        """Longest root-to-leaf path, in edges."""
        best = 0
        todo = [(self.root, 0)]
        while todo:
            node, d = todo.pop()
            best = max(best, d)
            todo.extend((c, d + 1) for c in node.children)
        return best

    def conflict_count(self) -> int:
        count = 0
        todo = [self.root]
        while todo:
            node = todo.pop()
            if node.leaf == "UNSAT":
                count += 1
            todo.extend(node.children)
        return count

    def to_json_dict(self) -> dict:
        out = self.result.to_json_dict()
        del out["witnessVariable"]
        out.update(
            {
                "heuristic": self.heuristic,
                "branchCount": self.branch_count,
                "backtrackCount": self.backtrack_count,
                "freeVariables": list(self.free_variables),
                "nodeCount": self.node_count(),
                "depth": self.depth(),
                "root": self.root.to_json_dict(),
            }
        )
        return out


class _DpllSearch:
    def __init__(self, f: CnfFormula, heuristic: str):
        self.f = f
        self.clauses = [cl.literals for cl in f.clauses]
        self.heuristic = heuristic
        self.occ: dict[int, list[int]] = {}
        for idx, lits in enumerate(self.clauses):
            for lit in lits:
                self.occ.setdefault(lit, []).append(idx)
        self.static_count = {
            v: len(self.occ.get(v, ())) + len(self.occ.get(-v, ()))
            for v in range(1, f.variable_count + 1)
        }
        self.assign: Assignment = {}
        self.trail: list[int] = []
        self.sat_flag = [False] * len(self.clauses)
        self.sat_trail: list[int] = []
        self.sat_count = 0
        self.pending: deque[int] = deque()
        self.branch_count = 0
        self.conflict_seen = 0
        self.model: Assignment | None = None
        self.free: tuple[int, ...] = ()

    # -- state updates ------------------------------------------------

    def _set_literal(self, lit: int) -> None:
        var = abs(lit)
        self.assign[var] = lit > 0
        self.trail.append(var)
        self.pending.append(lit)
        for idx in self.occ.get(lit, ()):
            if not self.sat_flag[idx]:
                self.sat_flag[idx] = True
                self.sat_count += 1
                self.sat_trail.append(idx)

    def _undo_to(self, mark_assign: int, mark_sat: int) -> None:
        while len(self.trail) > mark_assign:
            del self.assign[self.trail.pop()]
        while len(self.sat_trail) > mark_sat:
            self.sat_flag[self.sat_trail.pop()] = False
            self.sat_count -= 1

    def _note_conflict(self) -> None:
        # a retreat follows unless this conflict ends the whole search;
        # the final tally fixes up the UNSAT case
        self.conflict_seen += 1

    # -- propagation ----------------------------------------------------

    def _clause_state(self, idx: int) -> int | None:
        """The single unassigned literal, 0 if falsified, None otherwise."""
        single = None
        for lit in self.clauses[idx]:
            val = self.assign.get(abs(lit))
            if val is None:
                if single is not None:
                    return None  # two unassigned, nothing to do
                single = lit
            elif (lit > 0) == val:
                return None  # satisfied (flag may lag behind seeds)
        return 0 if single is None else single

    def _force(self, lit: int, wide: bool, tip: TraceNode) -> TraceNode:
        if wide:
            # no implication form: the excluded value is probed and refuted
            probe = TraceNode("refutation", abs(lit), not (lit > 0), leaf="UNSAT")
            tip.children.append(probe)
            self._note_conflict()
            self.branch_count += 1
        node = TraceNode("propagation", abs(lit), lit > 0)
        tip.children.append(node)
        self._set_literal(lit)
        return node

    def _propagate(self, tip: TraceNode) -> TraceNode | None:
        """Drain the unit-propagation queue, growing the trace chain at tip.

        Returns the new chain tip, or None on conflict (with the dead node
        already marked as an UNSAT leaf).
        """
        while self.pending:
            lit = self.pending.popleft()
            for idx in self.occ.get(-lit, ()):
                if self.sat_flag[idx]:
                    continue
                state = self._clause_state(idx)
                if state is None:
                    continue
                if state == 0:
                    tip.leaf = "UNSAT"
                    self._note_conflict()
                    self.pending.clear()
                    return None
                tip = self._force(state, len(self.clauses[idx]) >= 3, tip)
        return tip

    def _prime_units(self, tip: TraceNode) -> TraceNode | None:
        """Fire original unit clauses before any decision is made."""
        for idx, lits in enumerate(self.clauses):
            if len(lits) == 1 and not self.sat_flag[idx]:
                state = self._clause_state(idx)
                if state == 0:
                    tip.leaf = "UNSAT"
                    self._note_conflict()
                    self.pending.clear()
                    return None
                if state is not None:
                    tip = self._force(state, False, tip)
                    new_tip = self._propagate(tip)
                    if new_tip is None:
                        return None
                    tip = new_tip
        return tip

    # -- branching ------------------------------------------------------

    def _pick_variable(self) -> int:
        candidates: set[int] = set()
        for idx, lits in enumerate(self.clauses):
            if self.sat_flag[idx]:
                continue
            for lit in lits:
                if abs(lit) not in self.assign:
                    candidates.add(abs(lit))
        if self.heuristic == "most-occurrences":
            return max(candidates, key=lambda v: (self.static_count[v], -v))
        return min(candidates)

    def _mark_sat(self, tip: TraceNode) -> None:
        tip.leaf = "SAT"
        self.model = dict(self.assign)
        self.free = tuple(
            v for v in range(1, self.f.variable_count + 1) if v not in self.assign
        )

    def _search(self, tip: TraceNode) -> bool:
        mark_assign, mark_sat = len(self.trail), len(self.sat_trail)
        new_tip = self._propagate(tip)
        if new_tip is None:
            self._undo_to(mark_assign, mark_sat)
            return False
        tip = new_tip
        if self.sat_count == len(self.clauses):
            self._mark_sat(tip)
            return True
        var = self._pick_variable()
        for value in (True, False):
            if value is False:
                self.branch_count += 1
            child = TraceNode("decision", var, value)
            tip.children.append(child)
            child_assign, child_sat = len(self.trail), len(self.sat_trail)
            self._set_literal(var if value else -var)
            if self._search(child):
                return True
            self._undo_to(child_assign, child_sat)
        self._undo_to(mark_assign, mark_sat)
        return False

    def run(self) -> tuple[SolveResult, DerivationTrace]:
        root = TraceNode("root", None, None)
        tip = self._prime_units(root)
        sat = False
        if tip is not None:
            if self.sat_count == len(self.clauses):
                self._mark_sat(tip)
                sat = True
            else:
                sat = self._search(tip)
        if sat:
            assert self.model is not None
            result = SolveResult(True, dict(self.model), None)
            if not satisfies(self.f, self.model):
                raise RuntimeError("dpll produced a non-model")
            # every conflict was retreated from: the SAT leaf came after it
            backtracks = self.conflict_seen
        else:
            result = SolveResult(False, None, None)
            # the final conflict ends the run, so it is not a retreat
            backtracks = max(0, self.conflict_seen - 1)
        trace = DerivationTrace(
            root=root,
            result=result,
            heuristic=self.heuristic,
            branch_count=self.branch_count,
            backtrack_count=backtracks,
            free_variables=self.free if sat else (),
        )
        return result, trace


def dpll_solve(
    f: CnfFormula, heuristic: str = "lowest-index"
) -> tuple[SolveResult, DerivationTrace]:
    """Complete backtracking search with unit propagation at every node.

    Heuristics pick the decision variable among the variables of currently
    unsatisfied clauses: "lowest-index" takes the smallest index,
    "most-occurrences" the variable occurring in the most clauses of the
    original formula (static counts, ties to the lowest index).  The true
    branch is always tried first.  SAT is declared as soon as every clause
    is satisfied; variables never assigned are reported free.
    """
    if heuristic not in HEURISTICS:
        raise ValueError(f"unknown heuristic {heuristic!r}, expected one of {HEURISTICS}")
    return _DpllSearch(f, heuristic).run()


# ---------------------------------------------------------------------------
# DOT rendering
# ---------------------------------------------------------------------------

def implication_graph_to_dot(g: ImplicationGraph) -> str:
    """Graphviz text for an implication graph; node names are literal text."""
    lines = ["digraph implication_graph {", "  rankdir=LR;"]
    for lit in g.literals():
        lines.append(f'  "{lit_text(lit)}";')
    pairs = sorted(
        ((e.antecedent, e.consequent) for e in g.edges),
        key=lambda p: (_lit_key(p[0]), _lit_key(p[1])),
    )
    for u, v in pairs:
        lines.append(f'  "{lit_text(u)}" -> "{lit_text(v)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def trace_to_dot(trace: DerivationTrace) -> str:
    """Graphviz text for a derivation trace.

    Decision nodes are double-circled, UNSAT leaves are filled, and node ids
    follow depth-first preorder, so the output is deterministic.
    """
    lines = ["digraph derivation_trace {", "  rankdir=TB;"]
    edges: list[tuple[int, int]] = []
    counter = 0

    def visit(node: TraceNode, parent: int | None) -> None:
        nonlocal counter
        me = counter
        counter += 1
        if node.kind == "root":
            label = "Start"
        else:
            assert node.variable is not None
            label = f"x{node.variable}={'true' if node.value else 'false'}"
        if node.leaf is not None:
            label += f" ({node.leaf})"
        attrs = [f'label="{label}"']
        if node.kind == "decision":
            attrs.append("shape=doublecircle")
        if node.leaf == "UNSAT":
            attrs.append("style=filled")
        lines.append(f"  n{me} [{', '.join(attrs)}];")
        if parent is not None:
            edges.append((parent, me))
        for child in node.children:
            visit(child, me)

    visit(trace.root, None)
    for u, v in edges:
        lines.append(f"  n{u} -> n{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
