void f(void)
{
    const int c = 0;
    int *p = 0;
    (void)c;
    (void)p;
}
