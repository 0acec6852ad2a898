#pragma once
#include "src/core/app.h"
#include "src/gfx/gfx.h"
