#pragma once

#include "error.hpp"
#include "linalg.hpp"
#include "lqu.hpp"
#include "models.hpp"
#include "sweep.hpp"
#include "thermal.hpp"
