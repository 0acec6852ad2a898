#include "../../src/gfx/texture.h"
#include "../../missing/thing.h"
