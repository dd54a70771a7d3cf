import math

### File formats ###

field_magic = b"QTF1"
tomogram_magic = b"QTG1"

dtype_codes = {
    "f64": 0,
    "c128": 1,
}

### Tolerances ###

hermitian_tolerance = 1e-10
real_valued_tolerance = 1e-10
imaginary_residue_tolerance = 1e-8
norm_tolerance = 1e-9
singular_sine = 1e-6

### States ###

max_fock_index = 60
coherent_mass_tolerance = 1e-6

### Regularity diagnostics ###

stable_band = 0.05
diverging_ratio = 1.5
minimum_refinements = 3

### Tomography ###

minimum_polar_angles = 4
minimum_transition_angles = 8

### Transition probability normalization ###

normalization_candidates = (1.0, 1.0 / (2.0 * math.pi))
calibration_tolerance = 0.01

### CLI exit codes ###

exit_ok = 0
exit_usage = 2
exit_io = 3
exit_numerical = 4
