#ifndef HYDROCAS_HYDROCAS_HPP
#define HYDROCAS_HYDROCAS_HPP

#include "constants.hpp"
#include "errors.hpp"
#include "fluctuation.hpp"
#include "lindhard.hpp"
#include "materials.hpp"
#include "quadrature.hpp"
#include "reflection.hpp"

#endif // HYDROCAS_HYDROCAS_HPP
