#pragma once

#include <stdexcept>
#include <string>

namespace mahler {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct not_laurent : error { using error::error; };
struct not_unimodular : error { using error::error; };
struct near_zero_on_torus : error { using error::error; };
struct no_solution : error { using error::error; };
struct insufficient_truncation : error { using error::error; };
struct incomparable_truncation : error { using error::error; };
struct combo_mismatch : error { using error::error; };
struct not_positive_definite : error { using error::error; };
struct invalid_discriminant : error { using error::error; };
struct no_prime_found : error { using error::error; };
struct not_multiplicative : error { using error::error; };
struct empty_set : error { using error::error; };
struct non_integral_coefficients : error { using error::error; };
struct tolerance_unreachable : error { using error::error; };
struct invalid_character_modulus : error { using error::error; };
struct no_suitable_representative : error { using error::error; };
struct non_two_torsion_class_group : error { using error::error; };
struct outside_fundamental_domain : error { using error::error; };
struct data_error : error { using error::error; };

} // namespace mahler
