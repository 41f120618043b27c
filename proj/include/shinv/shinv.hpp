#pragma once

#include "shinv/errors.hpp"
#include "shinv/polykernel.hpp"
#include "shinv/superpotential.hpp"
#include "shinv/catalog.hpp"
#include "shinv/verifier.hpp"
#include "shinv/perturbation.hpp"
#include "shinv/spectral.hpp"
