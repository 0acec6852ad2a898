#pragma once
#include "sound.h"
