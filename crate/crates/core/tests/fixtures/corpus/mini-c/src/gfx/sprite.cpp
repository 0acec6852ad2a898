#include "sprite.h"
#include "texture.h"
