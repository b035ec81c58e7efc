#pragma once

#include "multiquad/cdk.hpp"
#include "multiquad/eigen_qr.hpp"
#include "multiquad/errors.hpp"
#include "multiquad/hessenberg.hpp"
#include "multiquad/io.hpp"
#include "multiquad/linalg.hpp"
#include "multiquad/log.hpp"
#include "multiquad/measures.hpp"
#include "multiquad/mop.hpp"
#include "multiquad/multi_index.hpp"
#include "multiquad/polynomial.hpp"
#include "multiquad/quadrature.hpp"
#include "multiquad/quotient_ring.hpp"
#include "multiquad/scalar.hpp"
#include "multiquad/spectral.hpp"
