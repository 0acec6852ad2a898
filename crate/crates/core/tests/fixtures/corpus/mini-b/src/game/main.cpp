#include "world_actor.h"
#include <lumen/core.h>
#include ASSET_HEADER
