# core/plugin_interface.py
"""
Defines the BoundPlugin interface every catalog entry implements.
"""
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Tuple

if TYPE_CHECKING:
    from modules.bound_catalog import BoundReport
    from modules.verification.campaign import CaseContext

OPERAND_KINDS = ("single", "pair", "block", "commuting_pair", "psd_pair")


@dataclass(frozen=True)
class ResolvedGrids:
    """Concrete parameter values a plugin sweeps for one case."""
    t: Tuple[float, ...] = (0.0, 0.25, 0.5, 0.75, 1.0)
    r: Tuple[float, ...] = (1.0, 2.0)
    s: Tuple[float, ...] = (0.0, 0.5, 1.0)
    alpha: Tuple[float, ...] = (0.0, 1.0)
    lam: Tuple[float, ...] = (1.0,)
    extra: Dict[str, Any] = field(default_factory=dict)


class BoundPlugin:
    def __init__(self, bound_id: str, description: str, operands: Tuple[str, ...],
                 proved: bool = True, shared_resources: Optional[Dict[str, Any]] = None):
        self.bound_id = bound_id
        self.description = description
        self.operands = operands
        self.proved = proved
        self.shared_resources = shared_resources if shared_resources else {}

    @property
    def name(self) -> str:
        return self.bound_id

    def evaluate(self, case: "CaseContext", grids: ResolvedGrids) -> List["BoundReport"]:
        """
        Evaluate the bound for one generated case over the parameter grids.

        :param case: Model, operators and cached absolute values of the case.
        :param grids: Parameter values to sweep.
        :return: One report per (parameter combination, link).
        :raises NotImplementedError: If the plugin does not implement this method.
        """
        raise NotImplementedError(f"Bound plugin '{self.bound_id}' must implement evaluate.")

    def supports_operands(self, kind: str) -> bool:
        return kind in self.operands

    @staticmethod
    def get_required_resources() -> List[str]:
        """
        Optional: shared resource keys the plugin needs injected into its
        constructor, e.g. `return ['orlicz_functions']`.
        """
        return []
