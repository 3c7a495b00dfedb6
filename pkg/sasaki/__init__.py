"""
Verification engine for nearly (pseudo-)Sasakian tensor calculus.

Tensors at a point live in :mod:`sasaki.tensor`; fields, connections and
curvature on charts in :mod:`sasaki.geometry`, differentiated exactly by
:mod:`sasaki.jet`. Concrete structures come from :mod:`sasaki.zoo` and are
checked by :mod:`sasaki.checks`.
"""

from sasaki import exceptions
from sasaki.report import CheckReport, SpectrumResult
from sasaki.zoo import (AcmsField, DerivedOperators, get_model, validate_acms,
                        sasakian_defect, nearly_sasakian_defect, defect_norm,
                        zoo_standard_sasakian, zoo_pseudo_sasakian, zoo_perturbed,
                        zoo_nearly_sasakian_s5)
from sasaki.checks import CATALOGUE, run_checks, main_theorem_chain
