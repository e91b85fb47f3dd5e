"""
SC-FDMA versus OFDM envelope
============================

SC-FDMA spreads 32 QPSK symbols with a DFT (a conjugated 32-channel filter
stage), moves them onto the top 32 of 128 subcarriers through the transposed
multiplexer and runs a 128-channel second stage with a cyclic prefix. The
spread signal keeps a lower peak-to-average power ratio than plain OFDM
carrying the same symbols.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from mcframe import iq, metrics, oracles, presets

ofdm, scfdma = presets.preset_ofdm(), presets.preset_scfdma()

# %%
# Agreement with the DFT-spread textbook chain; the constant between the two
# is exactly one.
x = iq.prbs_symbols(seed=3, n=32)
got = scfdma.modulate(x).output(0)
ref = oracles.scfdma_reference(x)
print("scale", np.vdot(got, ref) / np.vdot(got, got))
print(oracles.compare(got, ref, 1e-9))

# %%
# PAPR per frame over 1000 frames.
data = iq.prbs_symbols(seed=11, n=1000 * 128).reshape(1000, 128)
p_ofdm = np.array([metrics.papr(ofdm.modulate(f).samples).db for f in data])
p_sc = np.array([metrics.papr(scfdma.modulate(f[:32]).samples).db for f in data])
print(f"median PAPR: OFDM {np.median(p_ofdm):.2f} dB, SC-FDMA {np.median(p_sc):.2f} dB")

# %%
# Complementary CDF of the per-frame PAPR.
fig, ax = plt.subplots(figsize=(6, 4))
for vals, name in ((p_ofdm, "CP-OFDM"), (p_sc, "SC-FDMA")):
    v = np.sort(vals)
    ax.semilogy(v, 1 - np.arange(v.size) / v.size, label=name)
ax.set_xlabel("PAPR [dB]")
ax.set_ylabel("P(PAPR > x)")
ax.legend()
fig.tight_layout()
fig.savefig("scfdma_papr.png", dpi=120)
