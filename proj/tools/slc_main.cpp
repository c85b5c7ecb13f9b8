#include <cstdio>
int main() { std::puts("slc: placeholder"); return 0; }
