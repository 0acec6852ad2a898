#pragma once
#include "gfx.h"
