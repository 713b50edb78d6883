#ifndef DCE_DCE_HPP
#define DCE_DCE_HPP

#include "dce/core.hpp"
#include "dce/dynamics.hpp"
#include "dce/errors.hpp"
#include "dce/logspace.hpp"
#include "dce/pdf.hpp"
#include "dce/pulsetrain.hpp"
#include "dce/stats.hpp"

// dce/oracle.hpp (Eigen) and dce/cli.hpp are included separately by the
// targets that need them.

#endif // DCE_DCE_HPP
