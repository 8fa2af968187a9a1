"""Reference mode tables for the two N = 19 benchmark structures, stored to
four decimals.  Each entry is (q, lambda_plus, lambda_minus,
eps_plus, eps_minus), ordered by descending q; the zero mode (lambda = 0,
eps = -2) is listed separately."""

ZERO_MODE = (0.0, -2.0)

EQUIDISTANT_19 = (
    (1.9794, 1.9931, -0.9931, -0.0023, -435.9440),
    (1.9664, 1.9888, -0.9888, -0.0038, -265.9316),
    (1.9457, 1.9818, -0.9818, -0.0061, -163.6370),
    (1.9112, 1.9701, -0.9701, -0.0101, -99.3122),
    (1.8490, 1.9488, -0.9488, -0.0174, -57.5786),
    (1.7294, 1.9069, -0.9069, -0.0320, -31.2310),
    (1.4863, 1.8177, -0.8177, -0.0647, -15.4553),
    (1.0066, 1.6210, -0.6210, -0.1446, -6.9153),
    (0.3299, 1.2615, -0.2615, -0.3265, -3.0625),
)

GEOMETRIC_19 = (
    (1.7867, 1.9271, -0.9271, -0.0249, -40.1605),
    (1.7707, 1.9215, -0.9215, -0.0269, -37.2239),
    (1.7408, 1.9110, -0.9110, -0.0306, -32.6949),
    (1.6904, 1.8930, -0.8930, -0.0370, -27.0318),
    (1.6073, 1.8628, -0.8628, -0.0479, -20.8683),
    (1.4676, 1.8106, -0.8106, -0.0674, -14.8369),
    (1.2282, 1.7158, -0.7158, -0.1046, -9.5571),
    (0.8299, 1.5392, -0.5392, -0.1815, -5.5104),
    (0.2982, 1.2404, -0.2404, -0.3390, -2.9494),
)

TABLES = {
    "table1": {"structure": {"generator": "equidistant", "N": 19}, "rows": EQUIDISTANT_19},
    "table2": {"structure": {"generator": "geometric", "N": 19, "r1": 1.0, "s": 0.8}, "rows": GEOMETRIC_19},
}

TOLERANCE = 5e-4
