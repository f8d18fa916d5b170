#pragma once

#include <string>

#include "qtk/qir/ir.hpp"

namespace qtk::bench {

Subroutine reset();
Subroutine qrandom();
Subroutine gen_qint();
Subroutine gen_x_plus_y();
Subroutine gen_max_sup();
Subroutine gen_max_mix();
Subroutine swap_test();
Subroutine purity();
Subroutine inner_product();
Subroutine empty();
Subroutine reverse();
Subroutine multi_swap();
Subroutine crk();
Subroutine phase_flip();
Subroutine grover();
Subroutine qft();
Subroutine qadd();
Subroutine teleport();
Subroutine qpe();

Expr crk_angle(const Expr& k);

Subroutine x_power();
Subroutine h_power();
Subroutine css_power();
Subroutine crz_power();

Subroutine reverse_skip_last();
Subroutine crk_wrong_angle();
Subroutine qft_bilo();
Subroutine phase_flip_no_undo();

/// YAML document of the default suite for one benchmark.
std::string default_suite_yaml(const std::string& name);

}  // namespace qtk::bench
