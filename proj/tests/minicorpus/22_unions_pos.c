union U {
    int i;
    char c;
};
