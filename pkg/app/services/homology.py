"""
Bar-type cell structure of a germ and its integral (co)homology.

The k-cells are the tuples [μ_1|⋯|μ_k] of nontrivial simples whose product
is again simple; their number is finite and vanishes above ||Δ||. The
differential is the normalized bar differential with trivial coefficients.
"""

from __future__ import annotations

import asyncio
import dataclasses
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import anyio

from .germ import IDENTITY, Germ, SimpleId
from .smith import IntegerMatrix, SmithForm, smith_normal_form
from ..config import settings
from ..models.analysisResults import CellCount, DimensionReport, HomologyGroup
from ..utils import ComputationTimeout

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class TupleCell:
    entries: Tuple[SimpleId, ...]
    total: SimpleId

    @property
    def dimension(self) -> int:
        return len(self.entries)


@dataclasses.dataclass(frozen=True)
class ChainComplex:
    """ranks[k] = number of k-cells; boundaries[k] = ∂_k with rows (k-1)-cells and columns k-cells."""
    ranks: Tuple[int, ...]
    boundaries: Tuple[IntegerMatrix, ...]

    @property
    def top_dimension(self) -> int:
        return max((k for k, r in enumerate(self.ranks) if r), default=0)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * r for k, r in enumerate(self.ranks))


# ---------------------------------------------------------------------------
# Concurrent reductions
# ---------------------------------------------------------------------------

async def _reduce_batch(matrices: Sequence[IntegerMatrix]) -> List[SmithForm]:
    results: List[Optional[SmithForm]] = [None] * len(matrices)
    limiter = anyio.CapacityLimiter(settings.GARSIDE_WORKER_THREADS)

    async def reduce_one(k: int, matrix: IntegerMatrix) -> None:
        results[k] = await anyio.to_thread.run_sync(
            smith_normal_form, matrix, limiter=limiter, abandon_on_cancel=True
        )

    async with anyio.create_task_group() as tg:
        for k, matrix in enumerate(matrices):
            tg.start_soon(reduce_one, k, matrix)
    return results  # type: ignore[return-value]


async def reduce_all_async(matrices: Sequence[IntegerMatrix], what: str = "boundary reduction") -> List[SmithForm]:
    """Awaitable form of reduce_all for callers already inside an event loop."""
    if not matrices:
        return []
    try:
        with anyio.fail_after(settings.GARSIDE_MAX_PROCESSING_SECONDS):
            return await _reduce_batch(matrices)
    except TimeoutError:
        raise ComputationTimeout(what, settings.GARSIDE_MAX_PROCESSING_SECONDS) from None


def reduce_all(matrices: Sequence[IntegerMatrix], what: str = "boundary reduction") -> List[SmithForm]:
    """
    Smith normal forms of several matrices in worker threads, results in input order.

    Synchronous only: it starts its own event loop, so coroutines must await
    reduce_all_async instead.
    """
    if not matrices:
        return []
    try:
        asyncio.get_running_loop()
    except RuntimeError:
        return anyio.run(reduce_all_async, matrices, what)
    raise RuntimeError("reduce_all cannot run inside an event loop; await reduce_all_async instead")


def groups_from_forms(
    ranks: Sequence[int],
    forms: Sequence[Optional[SmithForm]],
    first_degree: int = 0,
    cohomology: bool = False,
) -> List[HomologyGroup]:
    """
    (Co)homology of a complex from the Smith forms of its differentials.

    forms[k] belongs to ∂_k : C_k → C_{k-1} (None or missing means zero). The
    free rank is ranks[k] − rank ∂_k − rank ∂_{k+1}; torsion of H_k comes from
    ∂_{k+1}, torsion of H^k from ∂_k.
    """
    def rank_of(k: int) -> int:
        form = forms[k] if 0 <= k < len(forms) else None
        return form.rank if form is not None else 0

    def torsion_of(k: int) -> List[int]:
        form = forms[k] if 0 <= k < len(forms) else None
        return list(form.torsion) if form is not None else []

    groups = []
    for k, r in enumerate(ranks):
        free = r - rank_of(k) - rank_of(k + 1)
        torsion = torsion_of(k) if cohomology else torsion_of(k + 1)
        groups.append(HomologyGroup(dimension=k + first_degree, rank=free, torsion=torsion))
    return groups


# ---------------------------------------------------------------------------
# Cells and boundaries
# ---------------------------------------------------------------------------

def _enumerate_cells(germ: Germ) -> List[List[TupleCell]]:
    by_dimension: List[List[TupleCell]] = [[TupleCell((), IDENTITY)]]

    def extend(entries: Tuple[SimpleId, ...], total: SimpleId) -> None:
        for x in germ.right_multiples(total):
            if x == IDENTITY:
                continue
            grown = entries + (x,)
            product = germ.product(total, x)
            while len(by_dimension) <= len(grown):
                by_dimension.append([])
            by_dimension[len(grown)].append(TupleCell(grown, product))
            extend(grown, product)

    extend((), IDENTITY)
    while len(by_dimension) <= germ.delta_norm:
        by_dimension.append([])
    for k, layer in enumerate(by_dimension):
        layer.sort(key=lambda cell: cell.entries)
        logger.debug(f"{germ.name}: {len(layer)} cells in dimension {k}")
    return by_dimension


def all_cells(germ: Germ) -> List[List[TupleCell]]:
    return germ.memo("cells", lambda: _enumerate_cells(germ))


def cells(germ: Germ, k: int) -> List[TupleCell]:
    """All k-tuples of nontrivial simples with simple product, in lexicographic order."""
    if k < 0:
        raise ValueError(f"cell dimension must be >= 0, got {k}")
    layers = all_cells(germ)
    return list(layers[k]) if k < len(layers) else []


def boundary(germ: Germ, k: int) -> IntegerMatrix:
    """∂_k[μ_1|⋯|μ_k] = [μ_2|⋯] + Σ (−1)^i [⋯|μ_iμ_{i+1}|⋯] + (−1)^k [⋯|μ_{k−1}]."""
    if k < 1:
        raise ValueError(f"boundary dimension must be >= 1, got {k}")
    sources = cells(germ, k)
    targets = cells(germ, k - 1)
    row_of = {cell.entries: i for i, cell in enumerate(targets)}
    matrix = IntegerMatrix.zeros(len(targets), len(sources))
    for j, cell in enumerate(sources):
        column = matrix.columns[j]
        mu = cell.entries
        faces = [(mu[1:], 1), (mu[:-1], (-1) ** k)]
        for i in range(1, k):
            merged = mu[: i - 1] + (germ.product(mu[i - 1], mu[i]),) + mu[i + 1:]
            faces.append((merged, (-1) ** i))
        for face, sign in faces:
            r = row_of[face]
            value = column.get(r, 0) + sign
            if value:
                column[r] = value
            else:
                column.pop(r, None)
    return matrix


def chain_complex(germ: Germ) -> ChainComplex:
    def build() -> ChainComplex:
        layers = all_cells(germ)
        ranks = tuple(len(layer) for layer in layers)
        boundaries = [IntegerMatrix.zeros(0, ranks[0])]
        boundaries.extend(boundary(germ, k) for k in range(1, len(ranks)))
        return ChainComplex(ranks, tuple(boundaries))

    return germ.memo("chain_complex", build)


def euler_characteristic(germ: Germ) -> int:
    return chain_complex(germ).euler_characteristic()


# ---------------------------------------------------------------------------
# (Co)homology
# ---------------------------------------------------------------------------

def _boundary_forms(germ: Germ, transposed: bool) -> List[Optional[SmithForm]]:
    key = "coboundary_forms" if transposed else "boundary_forms"

    def build() -> List[Optional[SmithForm]]:
        complex_ = chain_complex(germ)
        matrices = [complex_.boundaries[k] for k in range(1, len(complex_.ranks))]
        if transposed:
            matrices = [m.transpose() for m in matrices]
        forms = reduce_all(matrices, what=f"reduction of {germ.name}")
        return [None] + forms

    return germ.memo(key, build)


def homology(germ: Germ) -> List[HomologyGroup]:
    """H_0, …, H_{||Δ||} of the bar-type complex."""
    complex_ = chain_complex(germ)
    groups = groups_from_forms(complex_.ranks, _boundary_forms(germ, transposed=False))
    logger.info(f"Homology of {germ.name}: " + ", ".join(f"H_{g.dimension} = {g.render()}" for g in groups))
    return groups


def cohomology(germ: Germ) -> List[HomologyGroup]:
    """H^0, …, H^{||Δ||} from the transposed boundaries δ^{k−1} = ∂_k^T."""
    complex_ = chain_complex(germ)
    return groups_from_forms(complex_.ranks, _boundary_forms(germ, transposed=True), cohomology=True)


def abelianization(germ: Germ) -> HomologyGroup:
    """Generators 𝒟 − {1}, relations a·b = c for every defined product of nontrivial simples."""
    columns: List[Dict[int, int]] = []
    for a in range(1, germ.size):
        for b in germ.right_multiples(a):
            if b == IDENTITY:
                continue
            c = germ.product(a, b)
            column: Dict[int, int] = {}
            for generator, sign in ((a, 1), (b, 1), (c, -1)):
                row = generator - 1
                value = column.get(row, 0) + sign
                if value:
                    column[row] = value
                else:
                    column.pop(row, None)
            columns.append(column)
    relations = IntegerMatrix(germ.size - 1, len(columns), columns)
    form = smith_normal_form(relations)
    return HomologyGroup(dimension=1, rank=relations.rows - form.rank, torsion=list(form.torsion))


def homology_euler_characteristic(groups: Sequence[HomologyGroup]) -> int:
    return sum((-1) ** g.dimension * g.rank for g in groups)


def dimension_report(germ: Germ) -> DimensionReport:
    """||Δ|| against the top cell dimension and the top nonvanishing cohomology degree."""
    complex_ = chain_complex(germ)
    top = max((g.dimension for g in cohomology(germ) if not g.is_zero()), default=0)
    return DimensionReport(
        germ=germ.name,
        delta_norm=germ.delta_norm,
        top_cell_dimension=complex_.top_dimension,
        top_nonzero_cohomology=top,
    )


def cell_counts(germ: Germ) -> List[CellCount]:
    return [CellCount(dimension=k, count=r) for k, r in enumerate(chain_complex(germ).ranks)]
