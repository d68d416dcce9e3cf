struct S {
    int a;
};
