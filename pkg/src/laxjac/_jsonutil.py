import numpy as np


def encode_complex(z):
    """Nested [re, im] pairs for a complex scalar or array."""
    z = np.asarray(z, dtype=complex)
    if z.ndim == 0:
        return [float(z.real), float(z.imag)]
    return [encode_complex(e) for e in z]


def decode_complex(obj):
    """Inverse of :func:`encode_complex`."""
    arr = np.asarray(obj, dtype=float)
    if arr.shape[-1] != 2:
        raise ValueError("complex values must be encoded as [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]
