"""Backend selection for the statevector kernels.

The compiled extension is used when it was built; otherwise the numpy
fallback is imported.  Set ``NNVQE_PURE_PYTHON=1`` to force the fallback.
"""
import os

if os.environ.get("NNVQE_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        from . import _pykernels as _impl

BACKEND = _impl.BACKEND
pauli_rotation = _impl.pauli_rotation
run_gates = _impl.run_gates
apply_pauli_sum = _impl.apply_pauli_sum
adjoint_sweep = _impl.adjoint_sweep

__all__ = ["BACKEND", "pauli_rotation", "run_gates", "apply_pauli_sum", "adjoint_sweep"]
