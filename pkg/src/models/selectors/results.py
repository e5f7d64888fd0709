from dataclasses import dataclass
from typing import Optional, Tuple

from src.exceptions import ConfigError
from src.models.design_core.design import CandidateModel


@dataclass(frozen=True)
class SelectionResult:
    """
    Outcome of a selector. `focus_coef` is a 1-based position inside `selected`;
    `trace` holds (model label, criterion value) pairs in visiting order.
    """
    selected: CandidateModel
    focus_coef: Optional[int] = None
    trace: Tuple[Tuple[str, float], ...] = ()
    notes: Tuple[str, ...] = ()
    entry_order: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.focus_coef is not None and not (1 <= self.focus_coef <= self.selected.size):
            raise ConfigError(f"focus_coef {self.focus_coef} outside model {self.selected.label()}")
        if not self.trace:
            object.__setattr__(self, 'trace', ((self.selected.label(), float('nan')),))

    def to_dict(self):
        return {
            'selected': self.selected.to_dict(),
            'focus_coef': self.focus_coef,
            'trace': [list(t) for t in self.trace],
            'notes': list(self.notes),
        }
