#ifndef PACKRIG_PACKRIG_HPP
#define PACKRIG_PACKRIG_HPP

#include "packrig/casebook.hpp"
#include "packrig/cli_io.hpp"
#include "packrig/core.hpp"
#include "packrig/first_order.hpp"
#include "packrig/layout.hpp"
#include "packrig/linalg.hpp"
#include "packrig/lp.hpp"
#include "packrig/matroid.hpp"
#include "packrig/rigidity.hpp"
#include "packrig/second_order.hpp"

#endif  // PACKRIG_PACKRIG_HPP
