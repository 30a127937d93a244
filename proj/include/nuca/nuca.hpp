#pragma once

#include "nuca/core.hpp"
#include "nuca/rule.hpp"
#include "nuca/config.hpp"
#include "nuca/finite_map.hpp"
#include "nuca/inverse.hpp"
#include "nuca/dynamics.hpp"
#include "nuca/gallery.hpp"
#include "nuca/io.hpp"
