int f(int a)
{
    int b = ++a;
    (void)"i++";
    return b + 1;
}
