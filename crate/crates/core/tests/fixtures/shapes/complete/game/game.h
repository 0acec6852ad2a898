#pragma once
#include "../core/core.h"
#include "../render/render.h"
#include "../res/res.h"
