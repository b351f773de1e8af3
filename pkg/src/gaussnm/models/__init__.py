from ._quad import QuadratureError
from .damping import DampingModel, damping_channel, damping_family, damping_nm_closed_form
from .ohmic import (
    OhmicBath,
    dissipation_kernel,
    noise_kernel,
    ohmic_coefficient_table,
    ohmic_coefficients,
    ohmic_qbm_family,
)
from .oracle import ode_oracle
from .qbm import CoefficientTable, QBMModel, qbm_F_closed_form, qbm_family, rotation, table_family

__all__ = [
    "QuadratureError",
    "DampingModel",
    "damping_channel",
    "damping_family",
    "damping_nm_closed_form",
    "OhmicBath",
    "dissipation_kernel",
    "noise_kernel",
    "ohmic_coefficient_table",
    "ohmic_coefficients",
    "ohmic_qbm_family",
    "ode_oracle",
    "CoefficientTable",
    "QBMModel",
    "qbm_F_closed_form",
    "qbm_family",
    "rotation",
    "table_family",
]
