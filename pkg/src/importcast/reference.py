"""Previously published benchmark errors for the ten-country task.

These normalized-scale MSE/MAE values were reported by an earlier LSTM
import-forecasting study of the same ten countries. They are shipped only
for side-by-side display in metrics.csv (columns labeled reference_*);
they are never asserted by tests, since that study's data snapshot, seeds
and architecture are unavailable.
"""

from __future__ import annotations

# country -> (train_mse, train_mae, test_mse, test_mae)
REFERENCE_ERRORS: dict[str, tuple[float, float, float, float]] = {
    "USA": (0.00026587, 0.009558063, 0.000593822, 0.010549653),
    "CAN": (0.000573174, 0.017034501, 0.000471171, 0.016917394),
    "DEU": (0.000610407, 0.016112808, 0.000437126, 0.015138935),
    "FRA": (0.000567954, 0.017604845, 0.000409339, 0.016679849),
    "JPN": (0.000913517, 0.020788627, 0.000633532, 0.01640135),
    "TUR": (0.000534323, 0.013281038, 0.000314573, 0.01217957),
    "KOR": (0.000237155, 0.009067117, 0.000636021, 0.012340967),
    "PRT": (0.000306369, 0.011394773, 0.000986045, 0.01962471),
    "GRC": (0.000185511, 0.009552464, 0.000188108, 0.008993208),
    "IRN": (0.000538507, 0.01618062, 0.000370002, 0.013099987),
}


def reference_errors(country_code: str) -> tuple[float, float, float, float] | None:
    return REFERENCE_ERRORS.get(country_code)
