#include "world_actor.h"
#include "audio/mixer.h"
