#pragma once

#include "umt/errors.hpp"
#include "umt/exact.hpp"
#include "umt/metric_space.hpp"
#include "umt/cantor.hpp"
#include "umt/minimax.hpp"
#include "umt/props.hpp"
#include "umt/deform.hpp"
#include "umt/ultrametrize.hpp"
#include "umt/distort.hpp"
#include "umt/embed.hpp"
#include "umt/generate.hpp"
#include "umt/json_io.hpp"
