"""Blowups of charts at coordinate centers and morphism transport.

A blowup at a coordinate subspace produces one chart per center
variable: in the chart distinguished by w_c, every other center variable
w_j is replaced by w_c*w_j, and w_c joins the divisor as the exceptional
coordinate.  Variable names are stable across charts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .chart import ChartedPair, MorphismOfPairs
from .poly import Polynomial


class TrivialBlowupError(ValueError):
    """Centers must involve at least two variables."""


@dataclass
class BlowupChart:
    """One standard affine chart of a blowup."""

    chart: ChartedPair
    distinguished: str
    substitution: dict[str, Polynomial]  # parent variable -> child expression


@dataclass
class BlowupStep:
    parent: ChartedPair
    center: tuple[str, ...]
    children: list[BlowupChart]


def blowup_chart(chart: ChartedPair, center: Sequence[str]) -> BlowupStep:
    center = tuple(center)
    if len(center) < 2:
        raise TrivialBlowupError("center must contain at least two variables")
    if len(set(center)) != len(center):
        raise ValueError("center variables must be pairwise distinct")
    for w in center:
        if w not in chart.variables:
            raise ValueError(f"center variable {w!r} not in chart")
    children = []
    for c in center:
        sub = {}
        for v in chart.variables:
            if v in center and v != c:
                sub[v] = Polynomial.variable(c, chart.variables) * Polynomial.variable(
                    v, chart.variables
                )
            else:
                sub[v] = Polynomial.variable(v, chart.variables)
        divisor = tuple(dict.fromkeys(chart.divisor_vars + (c,)))
        child = ChartedPair(chart.variables, divisor)
        children.append(BlowupChart(child, c, sub))
    return BlowupStep(chart, center, children)


def transform_polynomial(p: Polynomial, child: BlowupChart) -> Polynomial:
    return p.substitute(child.substitution)


def transform_morphism(
    phi: MorphismOfPairs, step: BlowupStep, child_index: int
) -> MorphismOfPairs:
    """Compose the morphism with one blowup chart substitution."""
    if step.parent.variables != phi.source.variables:
        raise ValueError("blowup step does not apply to this source chart")
    child = step.children[child_index]
    comps = {x: transform_polynomial(p, child) for x, p in phi.components.items()}
    return MorphismOfPairs(child.chart, phi.target, comps)


@dataclass
class BlowupNode:
    chart: ChartedPair
    substitution: dict[str, Polynomial]  # cumulative, from the root chart
    payload: object = None
    certificate: object = None
    center: Optional[tuple[str, ...]] = None
    children: list["BlowupNode"] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children


class BlowupTree:
    """Tree of blowup charts rooted at one chart, with cumulative
    substitutions at every node."""

    def __init__(self, root_chart: ChartedPair, payload: object = None):
        identity = {
            v: Polynomial.variable(v, root_chart.variables)
            for v in root_chart.variables
        }
        self.root = BlowupNode(root_chart, identity, payload)

    def leaves(self) -> list[BlowupNode]:
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node)
            else:
                stack.extend(reversed(node.children))
        return out

    def expand(self, node: BlowupNode, center: Sequence[str]) -> list[BlowupNode]:
        """Blow up a leaf at a coordinate center, attaching one child per
        center variable (substitutions composed from the root)."""
        if not node.is_leaf:
            raise ValueError("only leaves can be expanded")
        step = blowup_chart(node.chart, center)
        node.center = step.center
        for bc in step.children:
            composed = {
                v: node.substitution[v].substitute(bc.substitution)
                for v in node.chart.variables
            }
            node.children.append(BlowupNode(bc.chart, composed))
        return node.children

    def depth(self) -> int:
        def go(node, d):
            if node.is_leaf:
                return d
            return max(go(c, d + 1) for c in node.children)

        return go(self.root, 0)

    def step_count(self) -> int:
        count = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.children:
                count += 1
                stack.extend(node.children)
        return count
