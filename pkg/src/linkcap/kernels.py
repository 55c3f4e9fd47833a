"""Backend selection: compiled extension when available, pure Python otherwise.

Set LINKCAP_PURE_PYTHON=1 to force the fallback (used by the benchmark and
the backend parity tests).
"""

import os

if os.environ.get("LINKCAP_PURE_PYTHON"):
    from linkcap import _chainkernels_py as _impl

    BACKEND = "python"
else:
    try:
        from linkcap import _chainkernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from linkcap import _chainkernels_py as _impl

        BACKEND = "python"

g_entropy = _impl.g_entropy
shannon_raw = _impl.shannon_raw
holevo_raw = _impl.holevo_raw
chain_explicit = _impl.chain_explicit
chain_saturating = _impl.chain_saturating
chain_capped = _impl.chain_capped
saturating_se = _impl.saturating_se
capped_se = _impl.capped_se
saturating_se_logits = _impl.saturating_se_logits
capped_se_logits = _impl.capped_se_logits


def backend_name():
    return BACKEND
