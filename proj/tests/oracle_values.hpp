// Generated by tests/oracles/gen_oracles.py; do not edit.
#pragma once

namespace oracle {

inline constexpr double nu = 0.64989753694830152;
inline constexpr double kappa_per_m = 0.015710730191633505;
inline constexpr double thz_path_gain = 0.065875744878817223;
inline constexpr double fso_il = 0.74016903204530233;
inline constexpr double access_pl_db = -14.900943848727758;
inline constexpr double alpha_strong = 4.3438490233637012;
inline constexpr double beta_strong = 2.492989942580036;
inline constexpr double alpha_moderate = 5.8387756523453721;
inline constexpr double beta_moderate = 4.2495091665951754;
inline constexpr double fso_a0 = 0.39000617376743882;
inline constexpr double fso_xi2 = 20.927520001697745;
inline constexpr double fso_cdf_tau1_30db_5db = 1.5571352917110025e-4;
inline constexpr double fso_cdf_tau2_30db_5db = 0.062341642753761434;
inline constexpr double thz_cdf_30db_5db = 0.9999680954621373;
inline constexpr double thz_cdf_50db_5db_nr3 = 5.7467688430936125e-12;
inline constexpr double access_cdf_20db_5db = 0.13483137515708461;
inline constexpr double ln_gamma_4_343 = 2.2387897368119508;
inline constexpr double upper_gamma_2_5_3 = 0.407069175871303;
inline constexpr double bessel_k_1_851_2_3 = 0.14631884692567514;
inline constexpr double erfc_0_6267 = 0.3754625479438678;
inline constexpr double hyp2f1_1_4p5_5_0p3 = 1.3730581827244653;
inline constexpr double meijer_g_21_23 = 1.1724350211960372;

}  // namespace oracle
