#pragma once

#include "t2alg/axioms.hpp"
#include "t2alg/basic.hpp"
#include "t2alg/binary_op.hpp"
#include "t2alg/convolution.hpp"
#include "t2alg/error.hpp"
#include "t2alg/families.hpp"
#include "t2alg/ftv.hpp"
#include "t2alg/generator.hpp"
#include "t2alg/grid.hpp"
#include "t2alg/io.hpp"
#include "t2alg/lab.hpp"
#include "t2alg/operator_spec.hpp"
#include "t2alg/rescale.hpp"
