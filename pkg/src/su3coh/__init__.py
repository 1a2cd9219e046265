"""SU(3) coherent states from two triplets of Schwinger bosons.

Modules:

* :mod:`su3coh.fock` -- two-triplet Fock sectors, ladder operators.
* :mod:`su3coh.su2` -- SU(2) reference construction.
* :mod:`su3coh.algebra` -- Gell-Mann generators and the ``Q^a`` operators.
* :mod:`su3coh.irreps` -- traceless states and orthonormal irrep bases.
* :mod:`su3coh.manifold` -- chart, Haar measure, sampler, quadrature.
* :mod:`su3coh.coherent` -- ``|z, w>`` and ``|z, zbar>`` coherent states.
* :mod:`su3coh.path` -- energy functionals and the discretized action.
* :mod:`su3coh.verify` -- named invariant suites used by the CLI.
"""
__version__ = "0.1.0"

from .algebra import LAMBDA, F, q_operator  # noqa: E402,F401
from .coherent import coherent_zw, coherent_zzbar  # noqa: E402,F401
from .fock import KetVector, Occupation, enumerate_sector  # noqa: E402,F401
from .irreps import dimension, irrep_basis  # noqa: E402,F401
from .manifold import CohParams, make_grid, sample_haar  # noqa: E402,F401
