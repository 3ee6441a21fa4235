#ifndef HBI_HBI_HPP
#define HBI_HBI_HPP

#include "hbi/errors.hpp"
#include "hbi/geometry.hpp"
#include "hbi/oracle.hpp"
#include "hbi/panel.hpp"
#include "hbi/primitives.hpp"
#include "hbi/series.hpp"

#endif  // HBI_HBI_HPP
