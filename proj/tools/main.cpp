#include <cstdio>
int main() { std::puts("carrec: cli wiring pending"); return 0; }
