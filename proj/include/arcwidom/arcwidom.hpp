#pragma once

#include "error.hpp"
#include "fourier.hpp"
#include "geometry.hpp"
#include "conformal.hpp"
#include "potential.hpp"
#include "extremal.hpp"
#include "acceptance.hpp"
#include "cli.hpp"
