class Config:
    default_extent = 8.0
    default_count = 256
    default_angles = 64
    default_concurrency = 5
    char_oversampling = 4
    radon_interpolation_order = 3
    slice_interpolation_order = 5
    refinements = 3
    calibration_extent = 8.0
    calibration_count = 256
