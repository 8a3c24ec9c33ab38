#include <iostream>
int main() { std::cout << "cubical cli placeholder\n"; return 0; }
