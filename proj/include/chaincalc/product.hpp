#pragma once

#include "chaincalc/form.hpp"

namespace chaincalc {

/// Cartesian wedge product: terms ((p,q); sigma o tau (x) i1* alpha ^ i2* beta)
/// with points and degree vectors concatenated and the second factor's axes
/// shifted past the first block.  Block order needs no interleaving signs.
/// Bilinear; term count is the product of term counts.
DiracChain cartesian_wedge(const DiracChain& J, const DiracChain& K);

/// pi1* w ^ pi2* eta on the product space R^{n1+n2}: the coefficient on a
/// block-split index I u (L+n1) is w_I(x) * eta_L(y); mixed partials split
/// across the blocks.  Pairs with cartesian_wedge to give the product rule
/// integral(product_form, J x K) = integral(w, J) * integral(eta, K).
Form product_form(const Form& w, int n1, const Form& eta, int n2);

} // namespace chaincalc
