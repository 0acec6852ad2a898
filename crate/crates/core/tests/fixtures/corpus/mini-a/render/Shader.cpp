#include "Shader.h"
#include "resources/Resource.h"
