#pragma once
#include "texture.h"
