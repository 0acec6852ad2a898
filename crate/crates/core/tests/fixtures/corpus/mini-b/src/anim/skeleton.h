#pragma once
#include "scene/node.h"
