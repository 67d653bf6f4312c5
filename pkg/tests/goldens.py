"""Frozen reference values from tests/oracles/generate_goldens.py (mpmath, 40 digits)."""

K_HALF = 1.6857503548125960429

SNCNDN_03_05 = (0.29446555154955624471, 0.95566209454525067183, 0.98910187025283392115)

AUX_07_08 = (0.9041226694327656204, 1.1508931400286146835, 0.71212163173343815304)  # cd, nd, sd

THETA00_02_I = 1.0267020276347579855

# LP01 of a = 4 um, n1 = 1.45, nc = 1.445 at two V values:
# wavelength, U, effective index, overlap ratio int|F|^4 / int|F|^2
LP01_V20 = dict(lambda0=1.5118863645434121899e-6, U=1.5281840299453826384, n_e=1.4470829157683676857, ratio=2.0539008446710519338)
LP01_V22 = dict(lambda0=1.3744421495849201726e-6, U=1.5910592824373019105, n_e=1.4473869998969154148, ratio=2.4432637176349605044)
