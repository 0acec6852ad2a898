#include "device.h"
#include "gfx/util.h"
