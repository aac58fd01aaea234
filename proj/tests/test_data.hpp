#ifndef REGALG_TEST_DATA_HPP
#define REGALG_TEST_DATA_HPP

// Shared reference inputs used across the unit and acceptance suites.

namespace testdata {

// Degree-13 / degree-11 pair with an approximate common divisor of degree 10.
inline constexpr const char* kGcdP = "1-.333*x+0.667*x^3+x^10-0.333*x^11+0.666*x^13";
inline constexpr const char* kGcdQ = "-1.429-3.571*x-1.429*x^10-3.571*x^11";

// 7x7 Godunov matrix: simple eigenvalues 0, +-1, +-2, +-4 in exact arithmetic,
// but within ~3e-10 of a J4 + J3 bundle.
inline constexpr const char* kGodunov =
    "289 2064 336 128 80 32 16\n"
    "1152 30 1312 512 288 128 32\n"
    "-29 -2000 756 384 1008 224 48\n"
    "512 128 640 0 640 512 128\n"
    "1053 2256 -504 -384 -756 800 208\n"
    "-287 -16 1712 -128 1968 -30 2032\n"
    "-2176 -287 -1565 -512 -541 -1152 -289\n";

// Eigenvalues of the Godunov matrix's nearest J4 + J3 bundle.
inline constexpr double kGodunovLambda4 = -2.121366210414752;
inline constexpr double kGodunovLambda3 = 2.828488280553040;

// 6x6 matrix (integer entries / 100000) within ~1e-5 of a J3 + J2 + J1
// bundle at the nested radicals sqrt(k + sqrt(k + sqrt(k))), k = 2, 3, 5.
inline constexpr const char* kDefective6 =
    "2.14636 1.49815 -2.31707 -0.81521 -1.00000 -0.50185\n"
    "2.69034 2.33854 7.38068 3.69034 0.31336 1.69034\n"
    "-0.75161 -0.43824 0.08509 -0.75161 -0.68664 -1.12488\n"
    "-0.61796 -2.55806 2.51061 2.34361 2.68664 1.12858\n"
    "1.19219 -1.43454 5.38438 2.19219 3.58830 1.19219\n"
    "0.05757 2.37093 -2.19823 -0.94243 -0.62673 2.70577\n";

inline constexpr double kRadical2 = 1.9615705608064609;  // sqrt(2+sqrt(2+sqrt(2)))
inline constexpr double kRadical3 = 2.2749346687676715;
inline constexpr double kRadical5 = 2.7730838515731597;

}  // namespace testdata

#endif
