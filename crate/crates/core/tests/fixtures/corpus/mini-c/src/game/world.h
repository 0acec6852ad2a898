#pragma once
#include "../core/app.h"
