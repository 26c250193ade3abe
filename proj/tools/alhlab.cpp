#include <cstdio>

int main() {
    std::puts("alhlab: scenario runner not wired up yet");
    return 0;
}
