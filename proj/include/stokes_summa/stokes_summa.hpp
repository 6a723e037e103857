#pragma once

#include "stokes_summa/cauchy.hpp"
#include "stokes_summa/cover.hpp"
#include "stokes_summa/errors.hpp"
#include "stokes_summa/formal_series.hpp"
#include "stokes_summa/gamma.hpp"
#include "stokes_summa/initial_data.hpp"
#include "stokes_summa/io.hpp"
#include "stokes_summa/kernels.hpp"
#include "stokes_summa/mittag_leffler.hpp"
#include "stokes_summa/moments.hpp"
#include "stokes_summa/quadrature.hpp"
#include "stokes_summa/spline.hpp"
#include "stokes_summa/stokes.hpp"
#include "stokes_summa/transforms.hpp"
#include "stokes_summa/version.hpp"
