#pragma once
#include "../gfx/font.h"
