HERMITIAN_TOL = 1e-10
AXIS_NORM_TOL = 1e-12
PURE_NORM_TOL = 1e-12
TRACE_TOL = 1e-10
MIN_EIG_TOL = 1e-10
LAMBDA_SUM_TOL = 1e-12

# corte em λ_k+λ_l na fórmula espectral da QFI, multiplicado pela dimensão
QFI_EIG_CUT = 1e-12
QFI_NEG_CLAMP = 1e-9

# folga das desigualdades de compressão de spin, sempre a favor de "não detecta"
SQUEEZING_SLACK = 1e-12
# idem para o teste F_Q > C_sep
DETECTION_SLACK = 1e-12

ANALYTIC_VS_NUMERIC_RTOL = 1e-6
TAU_RTOL = 1e-9
SECTOR_CHECK_TOL = 1e-9
RADICAND_CLAMP = 1e-9

PAULI_EXPANSION_MAX_K = 6
ANALYTIC_CSEP_KS = (1, 2, 3)

# μ padrão do comando fig3 (ν = 1 − μ)
FIG3_MUS = (0.0, 0.4, 0.6, 0.7, 0.8, 0.9, 0.99, 1.0)

# oráculo de produto completo para H_{α,β}: parâmetros por qubit, N pequeno
FULL_PRODUCT_MAX_N = 8
# Nelder-Mead no disco α²+β² ≤ 1
HAB_REFINE_TOL = 1e-10
