#include "../game/world_actor.h"
#include "gfx/device.h"
