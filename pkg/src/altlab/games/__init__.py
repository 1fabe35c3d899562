"""Strategic-form games, IESDS and epistemic game models."""
from .epistemic import (EpistemicGameModel, InvalidModelError, TheoremVerdict, gamma, validate_model,
                        verify_theorem_A)
from .game import Dominance, GameError, IESDSResult, StrategicGame, iesds, strictly_dominated
from .io import load_game
from .lp import LPResult, linprog

__all__ = [
    "Dominance", "EpistemicGameModel", "GameError", "IESDSResult", "InvalidModelError", "LPResult",
    "StrategicGame", "TheoremVerdict", "gamma", "iesds", "linprog", "load_game", "strictly_dominated",
    "validate_model", "verify_theorem_A",
]
