// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

// Stand-in for an external document converter. Reads a stub document and
// writes its text to stdout; see encodeStubDocument.

#include <fstream>
#include <iostream>
#include <sstream>

#include "idexpose/corpus.hpp"

int main(int argc, char** argv)
{
    if (argc != 2) {
        std::cerr << "usage: idexpose-stub-extract <file>\n";
        return 2;
    }
    std::ifstream in(argv[1], std::ios::binary);
    if (!in) {
        std::cerr << "cannot open " << argv[1] << '\n';
        return 2;
    }
    std::ostringstream bytes;
    bytes << in.rdbuf();
    try {
        std::cout << idexpose::decodeStubDocument(bytes.str());
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 3;
    }
    return 0;
}
