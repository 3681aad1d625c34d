from minsir import PRESETS, KappaMuShadowedParams, SirModel, sir_cdf, exact_min_cdf, \
    asymptotic_min_law, weibull_min_cdf

# Rayleigh signal against one Rayleigh interferer, unit powers
rayleigh = KappaMuShadowedParams(kappa=0, mu=1, m=1)
model = SirModel(signal=rayleigh, interferers=[rayleigh])
sir_cdf(model, 1.0)                         # 0.5, which is z / (1 + z)
exact_min_cdf(model, 20, 0.01)              # 1 - 1.01 ** -20

# Named parameter sets
model = PRESETS['table2_case1']             # one signal, three interferers
law = asymptotic_min_law(model, 20)         # WeibullMinLaw(shape=3.0, scale=..., k_users=20)
weibull_min_cdf(law, law.scale)             # 1 - e^-1
