"""Regenerate src/nanotrap/data/cs133.json from the transcribed tables below.

Energies are entered in cm^-1 and stored in Hz; hyperfine constants in MHz
are stored in Hz.  Every numeric entry keeps a source tag.
"""
import json
from pathlib import Path

C_CM = 2.99792458e10  # cm/s

NIST = "NIST ASD, Cs I levels (Weber & Sansonetti 1987)"
QD = "quantum-defect extrapolation, IP=31406.4677 cm-1, R_Cs=109736.86 cm-1"
ARIM = "Arimondo, Inguscio & Violino, Rev. Mod. Phys. 49, 31 (1977)"
STECK = "Steck, Cesium D Line Data (rev. 2.2)"
SAF = "Safronova, Safronova & Clark, PRA 94, 012505 (2016)"
ARORA = "Arora, Safronova & Clark, PRA 76, 052516 (2007)"
LS = "LS-coupling line-strength ratio applied to the 6P3/2 value (estimate)"
SCAL = "n*^-3/2 scaling of the preceding series member (estimate)"

IP, RCS = 31406.4677, 109736.86


def qd(n, delta):
    return IP - RCS / (n - delta) ** 2


# label: (n, L, J, energy_cm, source, A_MHz, B_MHz, hfs_source, gamma_Hz, gamma_source)
levels = [
    ("6S1/2", 6, 0, 0.5, 0.0, NIST, 2298.1579425, 0.0, "SI second definition", 0.0, None),
    ("7S1/2", 7, 0, 0.5, 18535.5286, NIST, 545.90, 0.0, ARIM, 3.3e6, ARIM),
    ("8S1/2", 8, 0, 0.5, 24317.149, NIST, 219.12, 0.0, ARIM, 0.0, None),
    ("9S1/2", 9, 0, 0.5, 26910.662, NIST, 110.1, 0.0, ARIM, 0.0, None),
    ("10S1/2", 10, 0, 0.5, 28300.229, NIST, 63.2, 0.0, ARIM, 0.0, None),
    ("11S1/2", 11, 0, 0.5, 29131.73, NIST, 0.0, 0.0, None, 0.0, None),
    ("12S1/2", 12, 0, 0.5, 29668.80, NIST, 0.0, 0.0, None, 0.0, None),
    ("13S1/2", 13, 0, 0.5, qd(13, 4.0493), QD, 0.0, 0.0, None, 0.0, None),
    ("14S1/2", 14, 0, 0.5, qd(14, 4.0493), QD, 0.0, 0.0, None, 0.0, None),
    ("15S1/2", 15, 0, 0.5, qd(15, 4.0493), QD, 0.0, 0.0, None, 0.0, None),
    ("6P1/2", 6, 1, 0.5, 11178.26815870, NIST, 291.9201, 0.0, STECK, 4.575e6, STECK),
    ("7P1/2", 7, 1, 0.5, 21765.348, NIST, 94.35, 0.0, ARIM, 1.03e6, ARIM),
    ("8P1/2", 8, 1, 0.5, 25709.140, NIST, 42.97, 0.0, ARIM, 0.0, None),
    ("9P1/2", 9, 1, 0.5, 27636.996, NIST, 0.0, 0.0, None, 0.0, None),
    ("10P1/2", 10, 1, 0.5, 28726.81, NIST, 0.0, 0.0, None, 0.0, None),
    ("11P1/2", 11, 1, 0.5, 29403.42, NIST, 0.0, 0.0, None, 0.0, None),
    ("6P3/2", 6, 1, 1.5, 11732.3071041, NIST, 50.28827, -0.4934, STECK, 5.234e6, STECK),
    ("7P3/2", 7, 1, 1.5, 21946.397, NIST, 16.605, -0.15, ARIM, 1.16e6, ARIM),
    ("8P3/2", 8, 1, 1.5, 25791.508, NIST, 7.58, 0.0, ARIM, 0.0, None),
    ("9P3/2", 9, 1, 1.5, 27681.676, NIST, 0.0, 0.0, None, 0.0, None),
    ("10P3/2", 10, 1, 1.5, 28753.68, NIST, 0.0, 0.0, None, 0.0, None),
    ("11P3/2", 11, 1, 1.5, 29420.824, NIST, 0.0, 0.0, None, 0.0, None),
    ("5D3/2", 5, 2, 1.5, 14499.2568, NIST, 48.78, 0.1, ARIM, 0.175e6, ARIM),
    ("6D3/2", 6, 2, 1.5, 22588.8210, NIST, 16.34, -0.1, ARIM, 0.0, None),
    ("7D3/2", 7, 2, 1.5, 26047.828, NIST, 7.4, 0.0, ARIM, 0.0, None),
    ("8D3/2", 8, 2, 1.5, 27811.24, NIST, 0.0, 0.0, None, 0.0, None),
    ("9D3/2", 9, 2, 1.5, 28828.68, NIST, 0.0, 0.0, None, 0.0, None),
    ("10D3/2", 10, 2, 1.5, 29468.29, NIST, 0.0, 0.0, None, 0.0, None),
    ("11D3/2", 11, 2, 1.5, qd(11, 2.4754), QD, 0.0, 0.0, None, 0.0, None),
    ("5D5/2", 5, 2, 2.5, 14596.84232, NIST, -21.24, 0.2, ARIM, 0.124e6, ARIM),
    ("6D5/2", 6, 2, 2.5, 22631.6863, NIST, -4.69, 0.18, ARIM, 0.0, None),
    ("7D5/2", 7, 2, 2.5, 26068.767, NIST, -1.7, 0.0, ARIM, 0.0, None),
    ("8D5/2", 8, 2, 2.5, 27822.876, NIST, 0.0, 0.0, None, 0.0, None),
    ("9D5/2", 9, 2, 2.5, 28835.79, NIST, 0.0, 0.0, None, 0.0, None),
    ("10D5/2", 10, 2, 2.5, 29472.94, NIST, 0.0, 0.0, None, 0.0, None),
    ("11D5/2", 11, 2, 2.5, qd(11, 2.4663), QD, 0.0, 0.0, None, 0.0, None),
]

# reduced E1 matrix elements |<J||d||J'>| in e a0
lines = [
    ("6S1/2", "6P1/2", 4.5057, SAF), ("6S1/2", "6P3/2", 6.3398, SAF),
    ("6S1/2", "7P1/2", 0.2781, SAF), ("6S1/2", "7P3/2", 0.5742, SAF),
    ("6S1/2", "8P1/2", 0.0814, ARORA), ("6S1/2", "8P3/2", 0.2338, ARORA),
    ("6S1/2", "9P1/2", 0.0430, ARORA), ("6S1/2", "9P3/2", 0.1290, ARORA),
    ("6S1/2", "10P1/2", 0.0270, ARORA), ("6S1/2", "10P3/2", 0.0850, ARORA),
    ("6S1/2", "11P1/2", 0.0190, SCAL), ("6S1/2", "11P3/2", 0.0620, SCAL),
    ("6P3/2", "7S1/2", 6.4749, SAF), ("6P3/2", "8S1/2", 1.6100, SAF),
    ("6P3/2", "9S1/2", 0.9270, SAF), ("6P3/2", "10S1/2", 0.6470, ARORA),
    ("6P3/2", "11S1/2", 0.4940, ARORA), ("6P3/2", "12S1/2", 0.3990, ARORA),
    ("6P3/2", "13S1/2", 0.3330, SCAL), ("6P3/2", "14S1/2", 0.2850, SCAL),
    ("6P3/2", "15S1/2", 0.2490, SCAL),
    ("6P3/2", "5D3/2", 3.2700, SAF), ("6P3/2", "5D5/2", 9.9200, SAF),
    ("6P3/2", "6D3/2", 2.0500, SAF), ("6P3/2", "6D5/2", 6.1500, SAF),
    ("6P3/2", "7D3/2", 0.9600, ARORA), ("6P3/2", "7D5/2", 2.8900, ARORA),
    ("6P3/2", "8D3/2", 0.6100, ARORA), ("6P3/2", "8D5/2", 1.8200, ARORA),
    ("6P3/2", "9D3/2", 0.4400, ARORA), ("6P3/2", "9D5/2", 1.3100, ARORA),
    ("6P3/2", "10D3/2", 0.3400, SCAL), ("6P3/2", "10D5/2", 1.0200, SCAL),
    ("6P3/2", "11D3/2", 0.2800, SCAL), ("6P3/2", "11D5/2", 0.8300, SCAL),
]
# 6P1/2 partners: S(P1/2-S) = S(P3/2-S)/2 and S(P1/2-D3/2) = 5 S(P3/2-D3/2)
lines += [("6P1/2", up, round(d * (0.5 ** 0.5 if up.endswith("S1/2") else 5 ** 0.5), 4), LS)
          for lo, up, d, _ in list(lines)
          if lo == "6P3/2" and not up.endswith("D5/2")]


def q(value, source, unit=None):
    d = {"value": value, "source": source}
    if unit:
        d["unit"] = unit
    return d


def main():
    out = {
        "format": "nanotrap-atom-data",
        "version": 1,
        "species": "133Cs",
        "provenance": (
            "Level energies: NIST ASD (quantum-defect extrapolation where tagged). "
            "Hyperfine constants: Arimondo et al. 1977 and Steck's Cs D-line notes. "
            "Reduced E1 matrix elements |<J||d||J'>| (Edmonds convention, symmetric "
            "in J,J') from Safronova et al. 2016 and Arora et al. 2007; tail of each "
            "series estimated by n*^-3/2 scaling. D2 line 852.35 nm."),
        "nuclear_spin": q(3.5, "133Cs nuclear spin"),
        "mass": q(132.905451961 * 1.66053906660e-27, "AME2016 atomic mass of 133Cs", "kg"),
        "ground_hyperfine_splitting": q(9192631770.0, "SI second definition", "Hz"),
        "levels": [],
        "lines": [],
    }
    for (lab, n, L, J, e_cm, esrc, A, B, hsrc, gam, gsrc) in levels:
        lev = {"label": lab, "n": n, "L": L, "J": J,
               "energy": q(e_cm * C_CM, esrc + f" ({e_cm:.6f} cm-1)", "Hz")}
        if hsrc is not None:
            lev["A"] = q(A * 1e6, hsrc, "Hz")
            lev["B"] = q(B * 1e6, hsrc, "Hz")
        if gsrc is not None:
            lev["gamma"] = q(gam, gsrc, "Hz")
        out["levels"].append(lev)
    for lo, up, d, src in lines:
        out["lines"].append({"lower": lo, "upper": up, "d": q(d, src, "e a0")})
    path = Path(__file__).resolve().parents[1] / "src/nanotrap/data/cs133.json"
    path.write_text(json.dumps(out, indent=1) + "\n")


if __name__ == "__main__":
    main()
