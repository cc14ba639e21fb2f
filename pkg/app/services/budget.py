"""Node budgets for memoized recursions (norms of long positive elements)."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from threading import Lock
from typing import Optional

from ..config import settings
from ..utils import BudgetExceeded

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NodeBudgetConfig:
    name: str
    node_limit: int


class NodeBudget:
    """Thread-safe counter of memo nodes; raises once the configured limit is crossed."""

    def __init__(self, config: NodeBudgetConfig) -> None:
        self.config = config
        self._spent = 0
        self._exhausted = False
        self._lock = Lock()

    @property
    def name(self) -> str:
        return self.config.name

    def charge(self, nodes: int = 1) -> None:
        with self._lock:
            self._spent += nodes
            if self._spent <= self.config.node_limit:
                return
            if not self._exhausted:
                self._exhausted = True
                logger.warning(
                    "Node budget exhausted: %s spent %d of %d",
                    self.name,
                    self._spent,
                    self.config.node_limit,
                )
        raise BudgetExceeded(self.name, self.config.node_limit)


def make_budget(name: str, node_limit: Optional[int] = None) -> NodeBudget:
    """Create a budget, defaulting the limit to GARSIDE_NODE_BUDGET."""
    limit = settings.GARSIDE_NODE_BUDGET if node_limit is None else node_limit
    return NodeBudget(NodeBudgetConfig(name=name, node_limit=limit))
