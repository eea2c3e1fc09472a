"""Regenerates src/wavelet/tables.rs from PyWavelets.

Analysis filters are stored in "h" orientation (time-reversed decomposition
filters), so approx[i] = sum_k low[k] * x[(2i + k) mod n].
"""
import sys
import pywt

BIOR = ["1.1", "1.3", "1.5", "2.2", "2.4", "2.6", "2.8", "3.1", "3.3", "3.5",
        "3.7", "3.9", "4.4", "5.5", "6.8"]


def fmt(xs):
    return ", ".join(repr(float(x)) for x in xs)


def orth_low(name):
    w = pywt.Wavelet(name)
    low = list(reversed(w.dec_lo))
    high = list(reversed(w.dec_hi))
    n = len(low)
    for k in range(n):
        assert abs(high[k] - (-1) ** k * low[n - 1 - k]) < 1e-14, name
    return low


out = []
out.append("// @generated by scripts/gen_filters.py; do not edit by hand.\n")
out.append("#![allow(clippy::excessive_precision, clippy::unreadable_literal)]\n")


def emit_orth(const, names):
    out.append(f"pub(crate) static {const}: [&[f64]; {len(names)}] = [\n")
    for name in names:
        out.append(f"    // {name}\n    &[{fmt(orth_low(name))}],\n")
    out.append("];\n\n")


emit_orth("DAUBECHIES", [f"db{i}" for i in range(1, 21)])
emit_orth("SYMLETS", [f"sym{i}" for i in range(2, 21)])
emit_orth("COIFLETS", [f"coif{i}" for i in range(1, 6)])
emit_orth("DMEY", ["dmey"])


def emit_pairs(const, prefix):
    out.append(f"pub(crate) static {const}: [(u8, u8, &[f64], &[f64]); {len(BIOR)}] = [\n")
    for p in BIOR:
        w = pywt.Wavelet(prefix + p)
        a, b = p.split(".")
        low = list(reversed(w.dec_lo))
        high = list(reversed(w.dec_hi))
        out.append(f"    (\n        {a},\n        {b},\n        &[{fmt(low)}],\n        &[{fmt(high)}],\n    ),\n")
    out.append("];\n\n")


emit_pairs("BIORTHOGONAL", "bior")
emit_pairs("REVERSE_BIORTHOGONAL", "rbio")

sys.stdout.write("".join(out).rstrip() + "\n")
