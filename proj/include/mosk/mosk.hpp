#pragma once

#include "mosk/errors.hpp"
#include "mosk/point.hpp"
#include "mosk/core.hpp"
#include "mosk/gallery.hpp"
#include "mosk/certify.hpp"
#include "mosk/compose.hpp"
#include "mosk/split.hpp"
#include "mosk/report.hpp"
