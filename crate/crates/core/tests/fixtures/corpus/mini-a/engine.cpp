#include "core/Engine.h"
#include <vector>
#include "render/Renderer.h"
int main() { return 0; }
